#pragma once

#include <string>
#include <vector>

#include "execbench/eventlog.hpp"

namespace fixtures {

using execbench::Variant;

inline Variant v(const std::string& letters) {
    Variant out;
    for (char c : letters) out.push_back(std::string(1, c));
    return out;
}

// Running example: own log L1 and benchmark log L2, one trace per variant.
inline std::vector<Variant> l1_variants() { return {v("adeg"), v("adfg"), v("cdeg"), v("cdfg")}; }
inline std::vector<Variant> l2_variants() { return {v("bdeg"), v("cdeg")}; }

inline execbench::EventLog l1() { return execbench::EventLog::from_variants(l1_variants()); }
inline execbench::EventLog l2() { return execbench::EventLog::from_variants(l2_variants()); }

// Log with `copies[i]` traces of `variants[i]`.
inline execbench::EventLog weighted(const std::vector<Variant>& variants, const std::vector<std::size_t>& copies) {
    std::vector<Variant> seqs;
    for (std::size_t i = 0; i < variants.size(); ++i)
        for (std::size_t k = 0; k < copies[i]; ++k) seqs.push_back(variants[i]);
    return execbench::EventLog::from_variants(seqs);
}

}  // namespace fixtures
