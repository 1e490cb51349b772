#ifndef SINGMOD_CACHE_HPP
#define SINGMOD_CACHE_HPP

#include "singmod/zagier.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace singmod {

struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail_cache {

// FNV-1a 64-bit over the record lines; keeps the file self-checking without
// pulling in a crypto dependency.
inline uint64_t fnv1a(uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string record_line(long D, long d, const Int& B) {
    nlohmann::json j;
    j["D"] = D;
    j["d"] = d;
    j["B"] = B.get_str();
    return j.dump();
}

}  // namespace detail_cache

// Serialize: one header line with the column windows and a content hash,
// then one record {"D":..,"d":..,"B":"<decimal>"} per nonzero entry,
// ordered by (D, d).  Zero in-window entries are implied by the header.
inline std::string gtable_serialize(const GTable& t) {
    std::vector<std::string> lines;
    for (const auto& [D, col] : t.cols)
        for (long d = col.low; d < col.prec(); ++d)
            if (sgn(col.coeff(d)) != 0)
                lines.push_back(detail_cache::record_line(D, d, col.coeff(d)));
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& l : lines) h = detail_cache::fnv1a(h, l);

    nlohmann::json header;
    header["format"] = "gtable-v1";
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& [D, col] : t.cols)
        cols.push_back({{"D", D}, {"lo", col.low}, {"prec", col.prec()}});
    header["columns"] = cols;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    header["hash"] = hex;

    std::ostringstream out;
    out << header.dump() << "\n";
    for (const auto& l : lines) out << l << "\n";
    return out.str();
}

inline GTable gtable_deserialize(std::istream& in) {
    std::string line;
    long lineno = 0;
    auto bad = [&](const std::string& why) {
        throw CacheError("gtable cache: line " + std::to_string(lineno) + ": " + why);
    };

    if (!std::getline(in, line)) throw CacheError("gtable cache: empty file");
    lineno = 1;
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("bad header: ") + e.what());
    }
    if (header.value("format", "") != "gtable-v1") bad("unknown format tag");
    std::string want_hash = header.value("hash", "");

    GTable t;
    for (const auto& c : header.at("columns")) {
        long D = c.at("D").get<long>();
        long lo = c.at("lo").get<long>();
        long prec = c.at("prec").get<long>();
        if (lo != -D || prec <= lo) bad("invalid column window for D=" + std::to_string(D));
        t.cols[D] = DenseZ::zero(lo, prec);
    }

    uint64_t h = 0xcbf29ce484222325ULL;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            long D = j.at("D").get<long>();
            long d = j.at("d").get<long>();
            Int B(j.at("B").get<std::string>());
            auto it = t.cols.find(D);
            if (it == t.cols.end()) bad("record for undeclared column D=" + std::to_string(D));
            if (d < it->second.low || d >= it->second.prec()) bad("record outside column window");
            it->second.at(d) = B;
        } catch (const nlohmann::json::exception& e) {
            bad(std::string("bad record: ") + e.what());
        } catch (const std::invalid_argument&) {
            bad("bad integer literal");
        }
        h = detail_cache::fnv1a(h, line);
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    if (want_hash != hex) throw CacheError("gtable cache: content hash mismatch");
    return t;
}

// Atomic store: write to <path>.tmp, then rename over the target.
inline void gtable_store(const GTable& t, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("gtable cache: cannot open " + tmp);
        out << gtable_serialize(t);
        if (!out.flush()) throw CacheError("gtable cache: write failure on " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline GTable gtable_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("gtable cache: cannot open " + path);
    return gtable_deserialize(in);
}

// Key-disjoint union; a shared column is only accepted when one window
// extends the other and they agree on the overlap.
inline void gtable_merge(GTable& dst, const GTable& src) {
    for (const auto& [D, col] : src.cols) {
        auto it = dst.cols.find(D);
        if (it == dst.cols.end()) {
            dst.cols[D] = col;
            continue;
        }
        const DenseZ& a = it->second;
        long hi = std::min(a.prec(), col.prec());
        for (long d = -D; d < hi; ++d)
            if (a.coeff(d) != col.coeff(d))
                throw CacheError("gtable merge: conflicting entry at D=" + std::to_string(D) +
                                 " d=" + std::to_string(d));
        if (col.prec() > a.prec()) it->second = col;
    }
}

}  // namespace singmod

#endif
