#include "sea/modpoly.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <vector>

#include "sea/arith.hpp"
#include "sea/errors.hpp"
#include "sea/fp.hpp"

namespace sea::modpoly {

namespace {

std::mutex g_mutex;
std::string g_dir_override;

#ifndef SEA_DEFAULT_MODPOLY_DIR
#define SEA_DEFAULT_MODPOLY_DIR ""
#endif

[[noreturn]] void corrupt(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::corrupt_data,
                "modular polynomial file " + path + " invalid: " + what);
}

} // namespace

const Integer& ModularPolynomial::coefficient(std::uint32_t i,
                                              std::uint32_t j) const {
    static const Integer zero = 0;
    if (i < j) std::swap(i, j);
    auto it = terms.find({i, j});
    return it == terms.end() ? zero : it->second;
}

void set_data_dir(const std::string& dir) {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_dir_override = dir;
}

std::string data_dir() {
    {
        std::lock_guard<std::mutex> lock(g_mutex);
        if (!g_dir_override.empty()) return g_dir_override;
    }
    if (const char* env = std::getenv("SEA_MODPOLY_DIR"); env && *env)
        return env;
    return SEA_DEFAULT_MODPOLY_DIR;
}

ModularPolynomial load_file(std::uint64_t ell, const std::string& dir) {
    if (ell == 2)
        throw Error(ErrorKind::invalid_argument,
                    "level 2 modular polynomial is unsupported");
    if (ell < 3 || !arith::is_prime(ell))
        throw Error(ErrorKind::invalid_argument,
                    "modular polynomial level must be an odd prime, got " +
                        std::to_string(ell));

    std::string path = dir + "/phi_" + std::to_string(ell) + ".txt";
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::data_not_found,
                    "modular polynomial data for ell=" + std::to_string(ell) +
                        " not found at " + path +
                        "; set SEA_MODPOLY_DIR or pass --modpoly-dir to a directory "
                        "containing phi_" + std::to_string(ell) + ".txt");

    std::string line;
    if (!std::getline(in, line)) corrupt(path, "empty file");
    {
        std::istringstream head(line);
        std::string tag;
        std::uint64_t file_ell = 0;
        if (!(head >> tag >> file_ell) || tag != "ell" || file_ell != ell)
            corrupt(path, "header line must be 'ell " + std::to_string(ell) + "'");
    }

    ModularPolynomial phi;
    phi.ell = ell;
    bool have_prev = false;
    std::pair<std::uint32_t, std::uint32_t> prev{0, 0};
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint32_t i = 0, j = 0;
        std::string cstr;
        if (!(ls >> i >> j >> cstr)) corrupt(path, "malformed term line '" + line + "'");
        if (j > i) corrupt(path, "term with i < j");
        std::pair<std::uint32_t, std::uint32_t> key{i, j};
        if (have_prev && !(key < prev))
            corrupt(path, "terms not sorted strictly descending");
        prev = key;
        have_prev = true;
        try {
            phi.terms.emplace(key, Integer(cstr, 10));
        } catch (const std::invalid_argument&) {
            corrupt(path, "unparsable coefficient '" + cstr + "'");
        }
    }

    // Degree and monicity: the only terms allowed at X-degree ell+1 form the
    // single monomial X^{ell+1} (plus its Y-mirror via symmetric closure).
    std::uint32_t deg = 0;
    for (const auto& [key, c] : phi.terms) deg = std::max(deg, key.first);
    if (deg != ell + 1) corrupt(path, "degree in each variable is not ell+1");
    for (const auto& [key, c] : phi.terms)
        if (key.first == ell + 1 && (key.second != 0 || c != 1))
            corrupt(path, "not monic in X at specialized Y");

    // Kronecker congruence: Phi == (X^ell - Y)(X - Y^ell) mod ell, i.e. the
    // stored residues are 1 at (ell+1,0) and -1 at (ell,ell) and (1,1).
    auto residue = [&](std::uint32_t i, std::uint32_t j) -> std::uint64_t {
        return fp::mod_u64(phi.coefficient(i, j), ell);
    };
    if (residue(static_cast<std::uint32_t>(ell), static_cast<std::uint32_t>(ell)) != ell - 1 ||
        residue(1, 1) != ell - 1)
        corrupt(path, "Kronecker congruence fails at (ell,ell) or (1,1)");
    for (const auto& [key, c] : phi.terms) {
        auto [i, j] = key;
        bool special = (i == ell + 1 && j == 0) || (i == ell && j == ell) ||
                       (i == 1 && j == 1);
        if (!special && fp::mod_u64(c, ell) != 0)
            corrupt(path, "Kronecker congruence fails at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
    }
    return phi;
}

const ModularPolynomial& load(std::uint64_t ell) {
    std::string dir = data_dir();
    static std::map<std::pair<std::string, std::uint64_t>, ModularPolynomial>
        cache;
    static std::mutex cache_mutex;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({dir, ell});
    if (it == cache.end())
        it = cache.emplace(std::make_pair(dir, ell), load_file(ell, dir)).first;
    return it->second;
}

poly::FpPoly instantiate(const ModularPolynomial& phi, std::uint64_t j,
                         std::uint64_t p) {
    if (p <= 3)
        throw Error(ErrorKind::invalid_argument,
                    "instantiation requires p > 3");
    std::size_t n = static_cast<std::size_t>(phi.ell) + 1;
    std::vector<std::uint64_t> jp(n + 1);
    jp[0] = 1 % p;
    for (std::size_t k = 1; k <= n; ++k) jp[k] = fp::mul(jp[k - 1], j % p, p);
    std::vector<std::uint64_t> coeffs(n + 1, 0);
    for (const auto& [key, c] : phi.terms) {
        auto [hi, lo] = key;
        std::uint64_t cm = fp::mod_u64(c, p);
        coeffs[lo] = fp::add(coeffs[lo], fp::mul(cm, jp[hi], p), p);
        if (hi != lo) coeffs[hi] = fp::add(coeffs[hi], fp::mul(cm, jp[lo], p), p);
    }
    return poly::FpPoly::from_coeffs(p, coeffs);
}

PartialValues instantiate_partials(const ModularPolynomial& phi,
                                   std::uint64_t j, std::uint64_t jtilde,
                                   std::uint64_t p) {
    if (p <= 3)
        throw Error(ErrorKind::invalid_argument,
                    "instantiation requires p > 3");
    std::size_t n = static_cast<std::size_t>(phi.ell) + 1;
    std::vector<std::uint64_t> xp(n + 1), yp(n + 1);
    xp[0] = yp[0] = 1 % p;
    for (std::size_t k = 1; k <= n; ++k) {
        xp[k] = fp::mul(xp[k - 1], j % p, p);
        yp[k] = fp::mul(yp[k - 1], jtilde % p, p);
    }
    PartialValues out;
    auto accumulate = [&](std::uint32_t u, std::uint32_t v, std::uint64_t cm) {
        if (u >= 1) {
            std::uint64_t d1 = fp::mul(cm, u % p, p);
            out.phi_x = fp::add(out.phi_x, fp::mul(d1, fp::mul(xp[u - 1], yp[v], p), p), p);
            if (u >= 2) {
                std::uint64_t d2 = fp::mul(d1, (u - 1) % p, p);
                out.phi_xx = fp::add(out.phi_xx, fp::mul(d2, fp::mul(xp[u - 2], yp[v], p), p), p);
            }
            if (v >= 1) {
                std::uint64_t d2 = fp::mul(d1, v % p, p);
                out.phi_xy = fp::add(out.phi_xy, fp::mul(d2, fp::mul(xp[u - 1], yp[v - 1], p), p), p);
            }
        }
        if (v >= 1) {
            std::uint64_t d1 = fp::mul(cm, v % p, p);
            out.phi_y = fp::add(out.phi_y, fp::mul(d1, fp::mul(xp[u], yp[v - 1], p), p), p);
            if (v >= 2) {
                std::uint64_t d2 = fp::mul(d1, (v - 1) % p, p);
                out.phi_yy = fp::add(out.phi_yy, fp::mul(d2, fp::mul(xp[u], yp[v - 2], p), p), p);
            }
        }
    };
    for (const auto& [key, c] : phi.terms) {
        auto [hi, lo] = key;
        std::uint64_t cm = fp::mod_u64(c, p);
        accumulate(hi, lo, cm);
        if (hi != lo) accumulate(lo, hi, cm);
    }
    return out;
}

} // namespace sea::modpoly
