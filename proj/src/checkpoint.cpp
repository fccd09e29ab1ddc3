#include "ccn/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace ccn {

namespace {

constexpr char kMagic[8] = {'C', 'C', 'N', 'C', 'K', 'P', 'T', '\n'};

template <class T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    require(in.good(), "truncated checkpoint");
    return v;
}

void write_string(std::ostream& out, const std::string& s) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    const auto len = read_pod<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    require(in.good(), "truncated checkpoint string");
    return s;
}

} // namespace

void Checkpoint::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write checkpoint to ", path);
    out.write(kMagic, sizeof(kMagic));
    write_pod<std::uint32_t>(out, kVersion);
    write_string(out, config.serialize());
    write_pod<std::int32_t>(out, epoch);
    write_pod<double>(out, best_metric);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(arrays.size()));
    for (const auto& [name, tensor] : arrays) {
        write_string(out, name);
        write_pod<std::uint8_t>(out, sizeof(real_t) == 8 ? 0 : 1);  // dtype tag
        write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(tensor.order()));
        for (int d : tensor.shape()) write_pod<std::int32_t>(out, d);
        out.write(reinterpret_cast<const char*>(tensor.data().data()),
                  static_cast<std::streamsize>(tensor.size() * sizeof(real_t)));
    }
    require(out.good(), "write failure on ", path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open checkpoint ", path);
    char magic[8];
    in.read(magic, sizeof(magic));
    require(in.good() && std::memcmp(magic, kMagic, sizeof(magic)) == 0,
            "not a checkpoint file: ", path);
    const auto version = read_pod<std::uint32_t>(in);
    require(version == kVersion, "checkpoint version ", version, " unsupported (expected ",
            kVersion, ")");
    Checkpoint ckpt;
    ckpt.config = RunConfig::parse(read_string(in));
    ckpt.epoch = read_pod<std::int32_t>(in);
    ckpt.best_metric = read_pod<double>(in);
    const auto count = read_pod<std::uint32_t>(in);
    for (std::uint32_t a = 0; a < count; ++a) {
        const std::string name = read_string(in);
        const auto dtype = read_pod<std::uint8_t>(in);
        require(dtype == (sizeof(real_t) == 8 ? 0 : 1), "checkpoint precision does not match ",
                "this build");
        const auto ndim = read_pod<std::uint8_t>(in);
        std::vector<int> shape;
        index_t total = 1;
        for (int d = 0; d < ndim; ++d) {
            shape.push_back(read_pod<std::int32_t>(in));
            total *= shape.back();
        }
        std::vector<real_t> data(static_cast<size_t>(total));
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(total * sizeof(real_t)));
        require(in.good(), "truncated array ", name);
        ckpt.arrays.emplace(name, DenseTensor(std::move(shape), std::move(data)));
    }
    return ckpt;
}

} // namespace ccn
