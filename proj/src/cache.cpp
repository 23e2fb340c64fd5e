#include "cache.hpp"

#include <cstring>
#include <fstream>
#include <ostream>
#include <vector>

#include "errors.hpp"

namespace twistlab {

namespace {

constexpr char kMagic[4] = {'T', 'W', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((unsigned char)(v >> (8 * i)));
}

void put_u64(std::vector<unsigned char>& buf, u64 v) {
    for (int i = 0; i < 8; ++i) buf.push_back((unsigned char)(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& buf, double d) {
    u64 v;
    std::memcpy(&v, &d, 8);
    put_u64(buf, v);
}

u64 get_u64(const unsigned char* p) {
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= u64(p[i]) << (8 * i);
    return v;
}

double get_f64(const unsigned char* p) {
    u64 v = get_u64(p);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

u64 byte_sum(const unsigned char* p, size_t n) {
    u64 s = 0;
    for (size_t i = 0; i < n; ++i) s += p[i];
    return s;
}

} // namespace

void save_table_cache(const CoefficientTable& table, const std::string& path) {
    std::vector<unsigned char> buf;
    buf.reserve(56 + 8 * (table.lambdas().size() + size_t(table.n_max())) + 8);
    for (char c : kMagic) buf.push_back((unsigned char)c);
    put_u32(buf, kVersion);
    for (unsigned char b : table.curve_hash()) buf.push_back(b);
    put_u64(buf, u64(table.p_max()));
    put_u64(buf, u64(table.n_max()));
    for (double lam : table.lambdas()) put_f64(buf, lam);
    for (i64 n = 1; n <= table.n_max(); ++n) put_f64(buf, table.an_values()[size_t(n)]);
    put_u64(buf, byte_sum(buf.data(), buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cache: cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    if (!out) throw io_error("cache: short write: " + path);
}

CoefficientTable load_table_cache(const CurveSpec& curve, const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw io_error("cache: cannot open: " + path);
    const std::streamsize size = in.tellg();
    in.seekg(0);
    if (size < 64) throw format_error("cache: file too short");
    std::vector<unsigned char> buf(static_cast<size_t>(size));
    in.read(reinterpret_cast<char*>(buf.data()), size);
    if (!in) throw io_error("cache: short read: " + path);

    if (std::memcmp(buf.data(), kMagic, 4) != 0)
        throw format_error("cache: bad magic");
    std::uint32_t version = 0;
    for (int i = 0; i < 4; ++i) version |= std::uint32_t(buf[size_t(4 + i)]) << (8 * i);
    if (version != kVersion) throw format_error("cache: unsupported version");

    const auto want = curve.hash();
    if (std::memcmp(buf.data() + 8, want.data(), 32) != 0)
        throw format_error("cache: curve hash mismatch");

    const i64 p_max = i64(get_u64(buf.data() + 40));
    const i64 n_max = i64(get_u64(buf.data() + 48));
    const std::vector<i64> primes = sieve_primes(p_max);
    const size_t expect = 56 + 8 * (primes.size() + size_t(n_max)) + 8;
    if (buf.size() != expect) throw format_error("cache: truncated or padded file");

    const u64 stored = get_u64(buf.data() + buf.size() - 8);
    if (stored != byte_sum(buf.data(), buf.size() - 8))
        throw format_error("cache: checksum mismatch");

    std::vector<double> lambdas(primes.size());
    size_t off = 56;
    for (size_t i = 0; i < primes.size(); ++i, off += 8) lambdas[i] = get_f64(buf.data() + off);
    std::vector<double> an(size_t(n_max) + 1, 0.0);
    for (i64 n = 1; n <= n_max; ++n, off += 8) an[size_t(n)] = get_f64(buf.data() + off);

    return CoefficientTable::from_arrays(curve, p_max, n_max, std::move(lambdas), std::move(an));
}

CoefficientTable load_or_build(const CurveSpec& curve, i64 p_req, i64 n_req,
                               const std::string& path, const BuildOptions& opts,
                               std::ostream* log) {
    if (!path.empty()) {
        try {
            CoefficientTable t = load_table_cache(curve, path);
            if (t.p_max() >= p_req && t.n_max() >= n_req) return t;
            if (log)
                *log << "# cache covers (p_max=" << t.p_max() << ", n_max=" << t.n_max()
                     << "), need (" << p_req << ", " << n_req << "); rebuilding\n";
        } catch (const io_error&) {
            // no cache yet
        } catch (const format_error& e) {
            if (log) *log << "# cache invalid (" << e.what() << "); rebuilding\n";
        }
    }
    CoefficientTable t = CoefficientTable::build(curve, p_req, n_req, opts);
    if (!path.empty()) save_table_cache(t, path);
    return t;
}

} // namespace twistlab
