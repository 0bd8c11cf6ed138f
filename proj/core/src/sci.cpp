#include "restie/sci.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <tuple>

#include <boost/multiprecision/cpp_int.hpp>

#include "restie/error.hpp"

namespace restie::sci {

namespace {

constexpr std::string_view kSciHeader = "user_loc\tfr_loc\tscaled_sci";
constexpr std::string_view kRawHeader = "loc_a\tloc_b\tfriend_count";

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

// three tab-separated fields, no more, no less
bool split3(std::string_view line, std::string_view out[3]) {
    const std::size_t t1 = line.find('\t');
    if (t1 == std::string_view::npos) return false;
    const std::size_t t2 = line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) return false;
    if (line.find('\t', t2 + 1) != std::string_view::npos) return false;
    out[0] = line.substr(0, t1);
    out[1] = line.substr(t1 + 1, t2 - t1 - 1);
    out[2] = line.substr(t2 + 1);
    return !out[0].empty() && !out[1].empty() && !out[2].empty();
}

std::uint64_t parse_u64(std::string_view text, std::uint64_t line,
                        const char* what) {
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw DataError("line " + std::to_string(line) + ": " + what +
                        " is not a non-negative integer: '" +
                        std::string(text) + "'");
    return value;
}

std::string pair_key(std::string_view a, std::string_view b) {
    std::string key;
    key.reserve(a.size() + b.size() + 1);
    key.append(a);
    key.push_back('\t');
    key.append(b);
    return key;
}

} // namespace

SciIngest::SciIngest(const ZoneFilter& filter, bool expect_header,
                     std::uint64_t first_line)
    : filter_(&filter), expect_header_(expect_header), line_(first_line - 1) {}

void SciIngest::feed(std::string_view bytes) {
    if (finished_)
        throw UsageError("SciIngest: feed after finish");
    while (!bytes.empty()) {
        const std::size_t nl = bytes.find('\n');
        if (nl == std::string_view::npos) {
            carry_.append(bytes);
            return;
        }
        if (carry_.empty()) {
            consume_line(bytes.substr(0, nl));
        } else {
            carry_.append(bytes.substr(0, nl));
            consume_line(carry_);
            carry_.clear();
        }
        bytes.remove_prefix(nl + 1);
    }
}

void SciIngest::consume_line(std::string_view raw_line) {
    ++line_;
    const std::string_view line = strip_cr(raw_line);
    if (line.empty()) return;

    if (expect_header_ && !header_seen_) {
        header_seen_ = true;
        if (line != kSciHeader)
            throw DataError("line " + std::to_string(line_) +
                            ": expected header '" + std::string(kSciHeader) +
                            "', got '" + std::string(line) + "'");
        return;
    }

    std::string_view f[3];
    if (!split3(line, f))
        throw DataError("line " + std::to_string(line_) +
                        ": expected 3 tab-separated fields");
    const std::uint64_t weight = parse_u64(f[2], line_, "scaled_sci");
    if (weight == 0)
        throw DataError("line " + std::to_string(line_) +
                        ": non-positive weight for pair (" + std::string(f[0]) +
                        ", " + std::string(f[1]) + ")");

    ++stats_.rows_read;
    if (filter_->find(f[0]) == filter_->end() ||
        filter_->find(f[1]) == filter_->end()) {
        ++stats_.rows_dropped_unknown_zone;
        return;
    }
    ++stats_.rows_kept;

    const bool swapped = f[1] < f[0];
    const std::string_view lo = swapped ? f[1] : f[0];
    const std::string_view hi = swapped ? f[0] : f[1];
    const std::uint8_t order_bit = (lo == hi) ? 1 : (swapped ? 2 : 1);
    if (lo == hi) ++stats_.self_pairs;

    auto [it, inserted] = pairs_.try_emplace(pair_key(lo, hi));
    PairState& state = it->second;
    if (inserted) {
        state.weight = weight;
        state.first_line = line_;
        state.orders_seen = order_bit;
        return;
    }
    if (state.orders_seen & order_bit)
        throw DataError("line " + std::to_string(line_) + ": duplicate pair (" +
                        std::string(f[0]) + ", " + std::string(f[1]) +
                        "), first listed at line " +
                        std::to_string(state.first_line));
    if (state.weight != weight)
        throw DataError("line " + std::to_string(line_) +
                        ": asymmetric weights for pair (" + std::string(f[0]) +
                        ", " + std::string(f[1]) + "): " +
                        std::to_string(state.weight) + " vs " +
                        std::to_string(weight));
    state.orders_seen |= order_bit;
}

std::pair<EdgeList, IngestStats> SciIngest::finish() {
    if (finished_)
        throw UsageError("SciIngest: finish called twice");
    finished_ = true;
    if (!carry_.empty()) {
        std::string last;
        last.swap(carry_);
        consume_line(last);
    }
    EdgeList list;
    list.edges.reserve(pairs_.size());
    for (const auto& [key, state] : pairs_) {
        const std::size_t tab = key.find('\t');
        EdgeRecord rec;
        rec.loc_a = key.substr(0, tab);
        rec.loc_b = key.substr(tab + 1);
        rec.weight = state.weight;
        list.edges.push_back(std::move(rec));
    }
    std::sort(list.edges.begin(), list.edges.end(),
              [](const EdgeRecord& a, const EdgeRecord& b) {
                  return std::tie(a.loc_a, a.loc_b) < std::tie(b.loc_a, b.loc_b);
              });
    return {std::move(list), stats_};
}

SciIngest SciIngest::merge(SciIngest&& first, SciIngest&& second) {
    if (!first.carry_.empty() || !second.carry_.empty())
        throw UsageError("SciIngest::merge: partial trailing line; split "
                         "inputs at line boundaries");
    if (second.expect_header_ && second.header_seen_)
        throw UsageError("SciIngest::merge: second range consumed a line as "
                         "header; construct it with expect_header=false");

    SciIngest out = std::move(first);
    for (auto& [key, state] : second.pairs_) {
        auto [it, inserted] = out.pairs_.try_emplace(key, state);
        if (inserted) continue;
        PairState& mine = it->second;
        if (mine.orders_seen & state.orders_seen)
            throw DataError("merge: duplicate pair (" +
                            key.substr(0, key.find('\t')) + ", " +
                            key.substr(key.find('\t') + 1) + ") at lines " +
                            std::to_string(mine.first_line) + " and " +
                            std::to_string(state.first_line));
        if (mine.weight != state.weight)
            throw DataError("merge: asymmetric weights for pair (" +
                            key.substr(0, key.find('\t')) + ", " +
                            key.substr(key.find('\t') + 1) + "): " +
                            std::to_string(mine.weight) + " vs " +
                            std::to_string(state.weight));
        mine.orders_seen |= state.orders_seen;
        mine.first_line = std::min(mine.first_line, state.first_line);
    }
    out.stats_.rows_read += second.stats_.rows_read;
    out.stats_.rows_kept += second.stats_.rows_kept;
    out.stats_.rows_dropped_unknown_zone +=
        second.stats_.rows_dropped_unknown_zone;
    out.stats_.self_pairs += second.stats_.self_pairs;
    out.line_ = std::max(out.line_, second.line_);
    return out;
}

std::pair<EdgeList, IngestStats> stream_edges(const std::string& path,
                                              const ZoneFilter& zone_filter) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path);
    SciIngest ingest(zone_filter);
    std::vector<char> buffer(1 << 20);
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const std::streamsize got = in.gcount();
        if (got <= 0) break;
        ingest.feed(std::string_view(buffer.data(),
                                     static_cast<std::size_t>(got)));
    }
    return ingest.finish();
}

SymmetryReport check_symmetry(
    const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& rows) {
    SymmetryReport report;
    std::unordered_map<std::string, std::pair<std::uint64_t, bool>> seen;
    for (const auto& [a, b, w] : rows) {
        const bool swapped = b < a;
        const std::string key = pair_key(swapped ? b : a, swapped ? a : b);
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen.emplace(key, std::make_pair(w, swapped));
            continue;
        }
        if (it->second.first != w && it->second.second != swapped) {
            const std::uint64_t w_ab =
                it->second.second ? w : it->second.first;
            const std::uint64_t w_ba =
                it->second.second ? it->second.first : w;
            report.violations.push_back(SymmetryViolation{
                swapped ? b : a, swapped ? a : b, w_ab, w_ba});
        }
    }
    return report;
}

EdgeList compute_sci_from_raw(const std::vector<RawConnectivityRecord>& raw,
                              const std::vector<UserCount>& users) {
    using boost::multiprecision::cpp_int;

    std::unordered_map<std::string, std::uint64_t> user_of;
    for (const auto& u : users) {
        if (u.users == 0)
            throw DataError("user count for zone '" + u.zone_id +
                            "' must be positive");
        if (!user_of.emplace(u.zone_id, u.users).second)
            throw DataError("duplicate user count for zone '" + u.zone_id + "'");
    }
    const auto users_of = [&](const std::string& zone) -> std::uint64_t {
        auto it = user_of.find(zone);
        if (it == user_of.end())
            throw DataError("zone '" + zone + "' is missing from the users file");
        return it->second;
    };

    struct Item {
        std::string lo, hi;
        cpp_int v;       // friendship count
        cpp_int denom;   // User(i) * User(j)
    };
    std::vector<Item> items;
    items.reserve(raw.size());
    std::unordered_set<std::string> pair_seen;
    for (const auto& rec : raw) {
        Item item;
        const bool swapped = rec.loc_b < rec.loc_a;
        item.lo = swapped ? rec.loc_b : rec.loc_a;
        item.hi = swapped ? rec.loc_a : rec.loc_b;
        if (!pair_seen.insert(pair_key(item.lo, item.hi)).second)
            throw DataError("duplicate raw pair (" + rec.loc_a + ", " +
                            rec.loc_b + ")");
        item.v = rec.friend_count;
        item.denom = cpp_int(users_of(rec.loc_a)) * users_of(rec.loc_b);
        items.push_back(std::move(item));
    }
    if (items.empty()) return {};

    // max raw measure: v / denom compared exactly via cross-multiplication
    std::size_t max_index = 0;
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (items[i].v * items[max_index].denom >
            items[max_index].v * items[i].denom)
            max_index = i;
    }
    if (items[max_index].v == 0)
        throw DataError("all friendship counts are zero; SCI scaling undefined");

    const cpp_int scale = 1000000000;
    EdgeList out;
    out.edges.reserve(items.size());
    for (const auto& item : items) {
        // weight = round_half_up(scale * (v/denom) / (v_max/denom_max))
        const cpp_int num = scale * item.v * items[max_index].denom;
        const cpp_int den = items[max_index].v * item.denom;
        cpp_int w = (2 * num + den) / (2 * den);
        if (w < 1) w = 1;
        EdgeRecord rec;
        rec.loc_a = item.lo;
        rec.loc_b = item.hi;
        rec.weight = w.convert_to<std::uint64_t>();
        out.edges.push_back(std::move(rec));
    }
    std::sort(out.edges.begin(), out.edges.end(),
              [](const EdgeRecord& a, const EdgeRecord& b) {
                  return std::tie(a.loc_a, a.loc_b) < std::tie(b.loc_a, b.loc_b);
              });
    return out;
}

std::pair<EdgeList, std::uint64_t> filter_edges(const EdgeList& edges,
                                                const ZoneFilter& filter) {
    EdgeList out;
    std::uint64_t dropped = 0;
    for (const auto& edge : edges.edges) {
        if (filter.find(edge.loc_a) != filter.end() &&
            filter.find(edge.loc_b) != filter.end())
            out.edges.push_back(edge);
        else
            ++dropped;
    }
    return {std::move(out), dropped};
}

std::vector<RawConnectivityRecord> load_raw_connectivity(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path);
    std::vector<RawConnectivityRecord> out;
    std::string line;
    std::uint64_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;
        if (header) {
            header = false;
            if (sv != kRawHeader)
                throw DataError(path + ": line 1: expected header '" +
                                std::string(kRawHeader) + "'");
            continue;
        }
        std::string_view f[3];
        if (!split3(sv, f))
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": expected 3 tab-separated fields");
        out.push_back(RawConnectivityRecord{
            std::string(f[0]), std::string(f[1]),
            parse_u64(f[2], line_no, "friend_count")});
    }
    return out;
}

std::vector<UserCount> load_user_counts(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path);
    std::vector<UserCount> out;
    std::string line;
    std::uint64_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = strip_cr(line);
        if (sv.empty()) continue;
        if (header) {
            header = false;
            if (sv != "zone_id,users")
                throw DataError(path + ": line 1: expected header 'zone_id,users'");
            continue;
        }
        const std::size_t comma = sv.find(',');
        if (comma == std::string_view::npos || comma == 0 ||
            comma + 1 >= sv.size())
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": expected 'zone_id,users'");
        UserCount u;
        u.zone_id = std::string(sv.substr(0, comma));
        u.users = parse_u64(sv.substr(comma + 1), line_no, "users");
        if (u.users == 0)
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": users must be positive");
        out.push_back(std::move(u));
    }
    return out;
}

} // namespace restie::sci
