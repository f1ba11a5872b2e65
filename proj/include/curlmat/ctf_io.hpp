#ifndef CURLMAT_CTF_IO_HPP
#define CURLMAT_CTF_IO_HPP

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "json.hpp"

#include "curlmat/spectral.hpp"

// .ctf field files: one line of JSON header, a newline, then little-endian
// float64 (re, im) pairs in component, z, y, x order.
namespace curlmat {

class ctf_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void to_little_endian(double v, unsigned char* out)
{
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>(bits >> (8 * b));
}

inline double from_little_endian(const unsigned char* in)
{
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(in[b]) << (8 * b);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

} // namespace detail

inline nlohmann::json ctf_header(const TensorField& f)
{
    const auto& g = f.grid();
    return {{"magic", "CTF1"},
            {"l", f.l()},
            {"basis", to_string(f.basis())},
            {"grid", {g.n[0], g.n[1], g.n[2]}},
            {"box", {g.box[0], g.box[1], g.box[2]}},
            {"dtype", "c128"},
            {"order", "component,z,y,x"}};
}

inline void write_ctf(std::ostream& os, const TensorField& f)
{
    os << ctf_header(f).dump() << '\n';
    std::vector<unsigned char> buf(f.data().size() * 16);
    for (std::size_t i = 0; i < f.data().size(); ++i) {
        detail::to_little_endian(f.data()[i].real(), &buf[16 * i]);
        detail::to_little_endian(f.data()[i].imag(), &buf[16 * i + 8]);
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!os) throw ctf_error("write_ctf: write failed");
}

inline void write_ctf(const std::string& path, const TensorField& f)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ctf_error("cannot open " + path + " for writing");
    write_ctf(os, f);
}

inline TensorField read_ctf(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw ctf_error("read_ctf: missing header");
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ctf_error(std::string("read_ctf: bad header: ") + e.what());
    }
    if (h.value("magic", "") != "CTF1") throw ctf_error("read_ctf: bad magic");
    if (h.value("dtype", "") != "c128") throw ctf_error("read_ctf: unsupported dtype");
    if (h.value("order", "") != "component,z,y,x") throw ctf_error("read_ctf: unsupported order");
    const std::string basis = h.value("basis", "");
    if (basis != "spherical" && basis != "cartesian") throw ctf_error("read_ctf: bad basis");
    GridSpec g;
    try {
        for (int a = 0; a < 3; ++a) {
            g.n[a] = h.at("grid").at(a).get<int>();
            g.box[a] = h.at("box").at(a).get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ctf_error(std::string("read_ctf: bad grid: ") + e.what());
    }
    TensorField f;
    try {
        f = TensorField(h.at("l").get<int>(), basis == "spherical" ? FieldBasis::spherical : FieldBasis::cartesian, g);
    } catch (const std::exception& e) {
        throw ctf_error(std::string("read_ctf: ") + e.what());
    }
    std::vector<unsigned char> buf(f.data().size() * 16);
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (is.gcount() != static_cast<std::streamsize>(buf.size())) throw ctf_error("read_ctf: truncated payload");
    for (std::size_t i = 0; i < f.data().size(); ++i) {
        const double re = detail::from_little_endian(&buf[16 * i]);
        const double im = detail::from_little_endian(&buf[16 * i + 8]);
        if (!std::isfinite(re) || !std::isfinite(im)) throw ctf_error("read_ctf: non-finite sample");
        f.data()[i] = {re, im};
    }
    return f;
}

inline TensorField read_ctf(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ctf_error("cannot open " + path);
    return read_ctf(is);
}

} // namespace curlmat

#endif // CURLMAT_CTF_IO_HPP
