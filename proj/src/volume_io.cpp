#include "volsr/volume_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace volsr {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Dims3 parse_dims(const std::string& value, const std::string& path) {
    Dims3 d;
    char c1 = 0, c2 = 0;
    std::istringstream is(value);
    if (!(is >> d.m >> c1 >> d.n >> c2 >> d.s) || c1 != ',' || c2 != ',' || !(is >> std::ws).eof())
        throw io_error(path + ": malformed dims '" + value + "'");
    if (d.count() == 0) throw io_error(path + ": zero-sized dims '" + value + "'");
    return d;
}

}  // namespace

std::string strip_volume_extension(const std::string& path) {
    if (ends_with(path, ".volhdr")) return path.substr(0, path.size() - 7);
    if (ends_with(path, ".vol")) return path.substr(0, path.size() - 4);
    return path;
}

void save_volume(const Volume3D& v, const std::string& base_in, VolumeDType dtype) {
    require_finite(v, "save_volume");
    const std::string base = strip_volume_extension(base_in);

    std::ofstream hdr(base + ".volhdr");
    if (!hdr) throw io_error("save_volume: cannot open " + base + ".volhdr for writing");
    hdr << "dims=" << v.dims().m << "," << v.dims().n << "," << v.dims().s << "\n"
        << "dtype=" << (dtype == VolumeDType::f32 ? "f32" : "f64") << "\n"
        << "order=lex\n";
    if (!hdr) throw io_error("save_volume: failed writing " + base + ".volhdr");

    std::ofstream raw(base + ".vol", std::ios::binary);
    if (!raw) throw io_error("save_volume: cannot open " + base + ".vol for writing");
    if (dtype == VolumeDType::f64) {
        raw.write(reinterpret_cast<const char*>(v.data().data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    } else {
        std::vector<float> buf(v.size());
        for (std::size_t p = 0; p < v.size(); ++p) buf[p] = static_cast<float>(v[p]);
        raw.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size() * sizeof(float)));
    }
    if (!raw) throw io_error("save_volume: failed writing " + base + ".vol");
}

Volume3D load_volume(const std::string& base_in) {
    const std::string base = strip_volume_extension(base_in);
    const std::string hdr_path = base + ".volhdr";
    const std::string raw_path = base + ".vol";

    std::ifstream hdr(hdr_path);
    if (!hdr) throw io_error("load_volume: cannot open " + hdr_path);

    bool have_dims = false, have_dtype = false, have_order = false;
    Dims3 dims;
    VolumeDType dtype = VolumeDType::f64;
    std::string line;
    while (std::getline(hdr, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw io_error(hdr_path + ": malformed line '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "dims") {
            if (have_dims) throw io_error(hdr_path + ": duplicate dims");
            dims = parse_dims(value, hdr_path);
            have_dims = true;
        } else if (key == "dtype") {
            if (have_dtype) throw io_error(hdr_path + ": duplicate dtype");
            if (value == "f32")
                dtype = VolumeDType::f32;
            else if (value == "f64")
                dtype = VolumeDType::f64;
            else
                throw io_error(hdr_path + ": unsupported dtype '" + value + "'");
            have_dtype = true;
        } else if (key == "order") {
            if (value != "lex") throw io_error(hdr_path + ": unsupported order '" + value + "'");
            have_order = true;
        } else {
            throw io_error(hdr_path + ": unknown key '" + key + "'");
        }
    }
    if (!have_dims || !have_dtype || !have_order)
        throw io_error(hdr_path + ": incomplete header (need dims, dtype, order)");

    std::ifstream raw(raw_path, std::ios::binary | std::ios::ate);
    if (!raw) throw io_error("load_volume: cannot open " + raw_path);
    const auto actual = static_cast<std::uint64_t>(raw.tellg());
    const std::size_t scalar = dtype == VolumeDType::f32 ? sizeof(float) : sizeof(double);
    const std::uint64_t expected = static_cast<std::uint64_t>(dims.count()) * scalar;
    if (actual != expected)
        throw io_error(raw_path + ": payload is " + std::to_string(actual) + " bytes, expected " +
                       std::to_string(expected) + " for dims " + to_string(dims));
    raw.seekg(0);

    Volume3D v(dims);
    if (dtype == VolumeDType::f64) {
        raw.read(reinterpret_cast<char*>(v.data().data()), static_cast<std::streamsize>(expected));
    } else {
        std::vector<float> buf(dims.count());
        raw.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(expected));
        for (std::size_t p = 0; p < buf.size(); ++p) v[p] = static_cast<double>(buf[p]);
    }
    if (!raw) throw io_error(raw_path + ": short read");
    for (std::size_t p = 0; p < v.size(); ++p)
        if (!std::isfinite(v[p]))
            throw io_error(raw_path + ": non-finite value at flat index " + std::to_string(p));
    return v;
}

}  // namespace volsr
