#ifndef TWISTLAB_CACHE_HPP
#define TWISTLAB_CACHE_HPP

#include <iosfwd>
#include <string>

#include "curve.hpp"

namespace twistlab {

// Coefficient cache, bit-exact layout:
//   magic "TWL1" (4 bytes) | u32 version | 32-byte curve hash |
//   u64 p_max | u64 n_max | f64 lambda[pi(p_max)] in prime order |
//   f64 an[1..n_max] | u64 checksum (sum of all preceding bytes mod 2^64)
// All integers and floats little-endian.

void save_table_cache(const CoefficientTable& table, const std::string& path);

// Throws io_error (missing/short file) or format_error (magic, version,
// hash or checksum mismatch).
CoefficientTable load_table_cache(const CurveSpec& curve, const std::string& path);

// Load when the cached table covers (p_req, n_req) and belongs to this
// curve; otherwise rebuild and overwrite, logging why.
CoefficientTable load_or_build(const CurveSpec& curve, i64 p_req, i64 n_req,
                               const std::string& path, const BuildOptions& opts,
                               std::ostream* log = nullptr);

} // namespace twistlab

#endif
