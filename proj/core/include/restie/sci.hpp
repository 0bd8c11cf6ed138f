#ifndef RESTIE_SCI_HPP
#define RESTIE_SCI_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace restie::sci {

// Scaled social-connectedness edge between two zones. Canonical storage:
// loc_a <= loc_b, unordered pair unique within an EdgeList.
struct EdgeRecord {
    std::string loc_a;
    std::string loc_b;
    std::uint64_t weight = 0; // scaled SCI, >= 1

    bool self_pair() const { return loc_a == loc_b; }
};

struct EdgeList {
    std::vector<EdgeRecord> edges; // sorted by (loc_a, loc_b)
};

struct IngestStats {
    std::uint64_t rows_read = 0;
    std::uint64_t rows_kept = 0;
    std::uint64_t rows_dropped_unknown_zone = 0;
    std::uint64_t self_pairs = 0;
};

struct RawConnectivityRecord {
    std::string loc_a;
    std::string loc_b;
    std::uint64_t friend_count = 0;
};

struct UserCount {
    std::string zone_id;
    std::uint64_t users = 0; // > 0
};

struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view sv) const {
        return std::hash<std::string_view>{}(sv);
    }
    std::size_t operator()(const std::string& s) const {
        return std::hash<std::string_view>{}(std::string_view{s});
    }
};

using ZoneFilter =
    std::unordered_set<std::string, StringHash, std::equal_to<>>;

// Incremental parser for the SCI TSV stream (header `user_loc fr_loc
// scaled_sci`, tab-separated). Bytes may arrive in arbitrary chunks; the
// result is independent of chunking. Rows with an endpoint outside the
// filter are dropped and counted, so memory is bounded by kept edges.
//
// Two parsers over disjoint consecutive line ranges of the same file can be
// combined with merge(); the merged result equals a single pass.
class SciIngest {
public:
    explicit SciIngest(const ZoneFilter& filter, bool expect_header = true,
                       std::uint64_t first_line = 1);

    void feed(std::string_view bytes);
    std::pair<EdgeList, IngestStats> finish();

    static SciIngest merge(SciIngest&& first, SciIngest&& second);

private:
    struct PairState {
        std::uint64_t weight = 0;
        std::uint64_t first_line = 0;
        std::uint8_t orders_seen = 0; // bit 0: (min,max) listed, bit 1: (max,min)
    };

    void consume_line(std::string_view line);

    const ZoneFilter* filter_;
    bool expect_header_;
    bool header_seen_ = false;
    bool finished_ = false;
    std::uint64_t line_ = 0;
    std::string carry_;
    std::unordered_map<std::string, PairState> pairs_;
    IngestStats stats_;
};

// Single-pass streaming read of an SCI file.
std::pair<EdgeList, IngestStats> stream_edges(const std::string& path,
                                              const ZoneFilter& zone_filter);

struct SymmetryViolation {
    std::string loc_a;
    std::string loc_b;
    std::uint64_t weight_ab = 0;
    std::uint64_t weight_ba = 0;
};

struct SymmetryReport {
    std::vector<SymmetryViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Ordered (as-listed) edge rows; both orders of a pair must agree when both
// appear. Single-order rows are accepted as unordered pairs.
SymmetryReport check_symmetry(
    const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& rows);

// Eq-style scaling of raw friendship counts: raw = v / (User(i)*User(j)),
// weight = max(1, round(raw / max_raw * 1e9)), half rounded away from zero.
// Exact rational arithmetic, so the result is invariant under scaling all
// user counts by a common positive integer.
EdgeList compute_sci_from_raw(const std::vector<RawConnectivityRecord>& raw,
                              const std::vector<UserCount>& users);

// Drops edges with an endpoint outside `filter`; returns the dropped count.
std::pair<EdgeList, std::uint64_t> filter_edges(const EdgeList& edges,
                                                const ZoneFilter& filter);

// Raw-mode input files: TSV `loc_a fr_loc friend_count`-style triple with
// header `loc_a loc_b friend_count`, and CSV `zone_id,users` with header.
std::vector<RawConnectivityRecord> load_raw_connectivity(const std::string& path);
std::vector<UserCount> load_user_counts(const std::string& path);

} // namespace restie::sci

#endif
