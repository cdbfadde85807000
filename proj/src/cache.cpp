#include "casimir/cache.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace casimir {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = kFnvOffset) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

void put_double(std::ostringstream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%a", v);
    os << buf << ';';
}

constexpr char kMagic[8] = {'C', 'H', 'O', 'E', 'I', 'G', '1', '\0'};

} // namespace

std::uint64_t fingerprint_model(const HamiltonianModel& model,
                                const std::vector<int>& truncations) {
    std::ostringstream os;
    std::visit(
        [&](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, ThreeBodyGeometry>) {
                os << "3body;";
                put_double(os, g.omega1);
                put_double(os, g.omega2);
                put_double(os, g.Omega);
            } else if constexpr (std::is_same_v<G, OneDGeometry>) {
                os << "1d;" << g.n_max << ';';
                put_double(os, g.length);
                put_double(os, g.Omega);
            } else {
                os << "3d;" << g.nx_max << ';' << g.ny_max << ';' << g.nz_max << ';';
                put_double(os, g.Lx);
                put_double(os, g.Ly);
                put_double(os, g.Lz);
                put_double(os, g.Omega);
            }
        },
        model.geometry);
    put_double(os, model.epsilon);
    os << "orders:";
    for (int k : model.include_orders.as_list()) os << k << ',';
    os << "trunc:";
    for (int t : truncations) os << t << ',';
    const std::string s = os.str();
    return fnv1a(s.data(), s.size());
}

std::string cache_file_path(const std::string& cache_dir, std::uint64_t fingerprint) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "eig_%016llx.bin",
                  static_cast<unsigned long long>(fingerprint));
    return (std::filesystem::path(cache_dir) / buf).string();
}

void cache_eig(const std::string& cache_dir, std::uint64_t fingerprint,
               const EigenDecomposition& eig) {
    std::filesystem::create_directories(cache_dir);
    const std::string path = cache_file_path(cache_dir, fingerprint);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cache_eig: cannot open " + path);

    const std::uint64_t dim = static_cast<std::uint64_t>(eig.energies.size());
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&fingerprint), sizeof(fingerprint));
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(&eig.residual), sizeof(eig.residual));

    std::uint64_t checksum = kFnvOffset;
    auto write_block = [&](const void* data, std::size_t bytes) {
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
        checksum = fnv1a(data, bytes, checksum);
    };
    write_block(eig.energies.data(), sizeof(double) * dim);
    write_block(eig.states.data(), sizeof(std::complex<double>) * dim * dim);
    out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
    if (!out) throw Error("cache_eig: write failed for " + path);
}

std::optional<EigenDecomposition> load_eig(const std::string& cache_dir,
                                           std::uint64_t fingerprint) {
    const std::string path = cache_file_path(cache_dir, fingerprint);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;

    char magic[8];
    std::uint64_t fp = 0, dim = 0;
    double residual = 0.0;
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(&fp), sizeof(fp));
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&residual), sizeof(residual));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0 || fp != fingerprint ||
        dim == 0 || dim > (1u << 20))
        return std::nullopt;

    EigenDecomposition eig;
    eig.fingerprint = fingerprint;
    eig.residual = residual;
    eig.energies.resize(static_cast<long>(dim));
    eig.states.resize(static_cast<long>(dim), static_cast<long>(dim));

    std::uint64_t checksum = kFnvOffset;
    auto read_block = [&](void* data, std::size_t bytes) {
        in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
        checksum = fnv1a(data, bytes, checksum);
    };
    read_block(eig.energies.data(), sizeof(double) * dim);
    read_block(eig.states.data(), sizeof(std::complex<double>) * dim * dim);
    std::uint64_t stored = 0;
    in.read(reinterpret_cast<char*>(&stored), sizeof(stored));
    if (!in || stored != checksum) return std::nullopt;
    if (eig.residual > 1e-9) return std::nullopt;
    return eig;
}

} // namespace casimir
