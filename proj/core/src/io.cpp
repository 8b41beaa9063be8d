#include "besov/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "besov/error.hpp"

namespace besov {
namespace {

static_assert(std::endian::native == std::endian::little, "BSGF I/O assumes a little-endian host");

class Writer {
public:
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void raw(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        bytes.insert(bytes.end(), b, b + n);
    }
    std::vector<std::uint8_t> bytes;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& b) : bytes_(b) {}
    std::uint32_t u32(const char* what) {
        std::uint32_t v;
        raw(&v, sizeof v, what);
        return v;
    }
    double f64(const char* what) {
        double v;
        raw(&v, sizeof v, what);
        return v;
    }
    void raw(void* p, std::size_t n, const char* what) {
        require(pos_ + n <= bytes_.size(), ErrorCode::Truncated,
                std::string("file ends inside ") + what);
        std::memcpy(p, bytes_.data() + pos_, n);
        pos_ += n;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_grid_function(const GridFunction& f) {
    Writer w;
    w.raw("BSGF", 4);
    w.u32(kBsgfVersion);
    const Grid& g = f.grid();
    w.u32(static_cast<std::uint32_t>(g.dim()));
    for (auto n : g.sizes()) w.u32(static_cast<std::uint32_t>(n));
    for (auto l : g.periods()) w.f64(l);
    w.u32(static_cast<std::uint32_t>(f.fiber_dim()));
    w.u32(f.fiber_p().numerator());
    w.u32(f.fiber_p().denominator());
    w.raw(f.values().data(), f.values().size() * sizeof(cplx));
    return std::move(w.bytes);
}

GridFunction decode_grid_function(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    char magic[4];
    r.raw(magic, 4, "magic");
    require(std::memcmp(magic, "BSGF", 4) == 0, ErrorCode::BadMagic, "expected BSGF header");
    const auto version = r.u32("version");
    require(version == kBsgfVersion, ErrorCode::VersionMismatch,
            "file version " + std::to_string(version) + ", reader supports " +
                std::to_string(kBsgfVersion));
    const auto n = r.u32("dimension");
    require(n >= 1 && n <= 3, ErrorCode::InvalidArgument, "dimension must be 1..3");
    std::vector<std::size_t> sizes(n);
    std::vector<double> periods(n);
    for (auto& s : sizes) s = r.u32("sizes");
    for (auto& l : periods) l = r.f64("periods");
    const auto d = r.u32("fiber dimension");
    const auto pn = r.u32("exponent");
    const auto pd = r.u32("exponent");
    Grid grid(sizes, periods);
    const std::size_t count = grid.point_count() * d;
    require(r.remaining() >= count * sizeof(cplx), ErrorCode::Truncated,
            "payload holds " + std::to_string(r.remaining() / sizeof(cplx)) + " of " +
                std::to_string(count) + " values");
    require(r.remaining() == count * sizeof(cplx), ErrorCode::InvalidArgument,
            "trailing bytes after payload");
    std::vector<cplx> values(count);
    r.raw(values.data(), count * sizeof(cplx), "values");
    return GridFunction(std::move(grid), d, Exponent::from_rational(pn, pd), std::move(values));
}

std::vector<std::uint8_t> encode_matrix(const Matrix& m) {
    require(m.rows() == m.cols() && m.rows() > 0, ErrorCode::InvalidArgument, "matrix must be square");
    Writer w;
    w.raw("BSGF", 4);
    w.u32(kBsgfVersion);
    w.u32(1);
    w.u32(1);
    w.f64(1.0);
    w.u32(static_cast<std::uint32_t>(m.size()));
    w.u32(2);
    w.u32(1);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const cplx v = m(i, j);
            w.raw(&v, sizeof v);
        }
    return std::move(w.bytes);
}

Matrix decode_matrix(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    char magic[4];
    r.raw(magic, 4, "magic");
    require(std::memcmp(magic, "BSGF", 4) == 0, ErrorCode::BadMagic, "expected BSGF header");
    const auto version = r.u32("version");
    require(version == kBsgfVersion, ErrorCode::VersionMismatch,
            "file version " + std::to_string(version));
    require(r.u32("dimension") == 1 && r.u32("sizes") == 1, ErrorCode::InvalidArgument,
            "matrix files hold a single point");
    r.f64("periods");
    const auto entries = r.u32("fiber dimension");
    r.u32("exponent");
    r.u32("exponent");
    std::uint32_t d = 0;
    while ((d + 1) * (d + 1) <= entries) ++d;
    require(d > 0 && d * d == entries, ErrorCode::InvalidArgument,
            "matrix fiber dimension must be a square");
    require(r.remaining() >= entries * sizeof(cplx), ErrorCode::Truncated, "matrix payload truncated");
    Matrix m(d, d);
    for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j) {
            cplx v;
            r.raw(&v, sizeof v, "values");
            m(i, j) = v;
        }
    return m;
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
    const auto bytes = encode_matrix(m);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Matrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_matrix(bytes);
}

void write_grid_function(const GridFunction& f, const std::filesystem::path& path) {
    const auto bytes = encode_grid_function(f);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorCode::Io, "write failed: " + path.string());
}

GridFunction read_grid_function(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_grid_function(bytes);
}

}  // namespace besov
