#pragma once

#include <cstddef>

#include "pathqv/partitions.hpp"
#include "pathqv/paths.hpp"

namespace pathqv::detail {

// Walks the sample grid of `path` while consuming partition points, which is
// how every sum of the form sum_k F(omega(tau_{k-1} ^ t), omega(tau_k ^ t)) is
// evaluated at all sample times in one pass.
//
//   complete(from, to): the partition interval (tau_{k-1}, tau_k] has closed
//                       before the current sample; `from`/`to` are the sample
//                       indices in force at its endpoints.
//   partial(k, from):   evaluate at sample k; the open interval started at the
//                       sample index `from` and is capped at t_k.
template <class Complete, class Partial>
void walk_partition(const SampledPath& path, const Partition& partition, Complete&& complete,
                    Partial&& partial) {
    std::size_t anchor = 0;
    std::size_t p = 1;
    const std::size_t points = partition.times.size();
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double t = path.time(k);
        while (p < points && partition.times[p] <= t) {
            const std::size_t idx = path.index_at(partition.times[p]);
            complete(anchor, idx);
            anchor = idx;
            ++p;
        }
        partial(k, anchor);
    }
}

}  // namespace pathqv::detail
