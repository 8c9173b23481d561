#include "fuselab/types.hpp"

#include <algorithm>
#include <utility>

namespace fuselab {

RankedList make_ranked_list(std::string query_id, std::vector<DocScore> entries,
                            int max_len) {
    std::sort(entries.begin(), entries.end(), score_order);
    if (std::cmp_greater(entries.size(), max_len))
        entries.resize(static_cast<std::size_t>(max_len));
    for (std::size_t i = 0; i < entries.size(); ++i)
        entries[i].rank = static_cast<int>(i) + 1;
    return RankedList{std::move(query_id), std::move(entries), max_len};
}

RankedList truncated(const RankedList& list, int depth) {
    RankedList out{list.query_id, {}, depth};
    const auto n = std::min<std::size_t>(list.entries.size(),
                                         static_cast<std::size_t>(depth));
    out.entries.assign(list.entries.begin(), list.entries.begin() + n);
    return out;
}

}  // namespace fuselab
