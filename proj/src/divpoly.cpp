#include "sea/divpoly.hpp"

#include <unordered_map>

#include "sea/arith.hpp"
#include "sea/errors.hpp"
#include "sea/fp.hpp"

namespace sea::divpoly {

using poly::FpPoly;

namespace {

// The y-free family f_k: f_k equals the kth division polynomial for odd k
// and the even ones are divided by 2y, so y never appears and odd products
// pick up the 16F^2 = (2y)^4 correction.
class FkTable {
public:
    explicit FkTable(const curve::CurveOverFp& e) : p_(e.p) {
        const uint64_t a = e.a, b = e.b, p = e.p;
        f_ = FpPoly::from_coeffs(p, {b, a, 0, 1});
        f16sq_ = poly::mul_scalar(poly::mul(f_, f_), 16 % p);
        memo_[0] = FpPoly::zero(p);
        memo_[1] = FpPoly::one(p);
        memo_[2] = FpPoly::one(p);
        memo_[3] = FpPoly::from_coeffs(
            p, {fp::neg(fp::mul(a, a, p), p), fp::mul(12 % p, b, p), fp::mul(6 % p, a, p), 0, 3 % p});
        uint64_t a2 = fp::mul(a, a, p), a3 = fp::mul(a2, a, p), b2 = fp::mul(b, b, p);
        memo_[4] = poly::mul_scalar(
            FpPoly::from_coeffs(p, {fp::neg(fp::add(fp::mul(8 % p, b2, p), a3, p), p),
                                    fp::neg(fp::mul(4 % p, fp::mul(a, b, p), p), p),
                                    fp::neg(fp::mul(5 % p, a2, p), p), fp::mul(20 % p, b, p),
                                    fp::mul(5 % p, a, p), 0, 1}),
            2);
    }

    const FpPoly& get(uint64_t k) {
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;
        const uint64_t m = k / 2;
        FpPoly val;
        if (k % 2 == 0) {
            // f_{2m} = f_m (f_{m+2} f_{m-1}^2 - f_{m-2} f_{m+1}^2)
            FpPoly lhs = poly::mul(get(m + 2), poly::mul(get(m - 1), get(m - 1)));
            FpPoly rhs = poly::mul(get(m - 2), poly::mul(get(m + 1), get(m + 1)));
            val = poly::mul(get(m), poly::sub(lhs, rhs));
        } else {
            // f_{2m+1} = f_{m+2} f_m^3 - f_{m-1} f_{m+1}^3, the even-index
            // side scaled by 16F^2
            FpPoly lhs = poly::mul(get(m + 2), poly::mul(get(m), poly::mul(get(m), get(m))));
            FpPoly rhs = poly::mul(get(m - 1), poly::mul(get(m + 1), poly::mul(get(m + 1), get(m + 1))));
            val = (m % 2 == 0) ? poly::sub(poly::mul(f16sq_, lhs), rhs)
                               : poly::sub(lhs, poly::mul(f16sq_, rhs));
        }
        return memo_.emplace(k, std::move(val)).first->second;
    }

private:
    uint64_t p_;
    FpPoly f_;
    FpPoly f16sq_;
    std::unordered_map<uint64_t, FpPoly> memo_;
};

void require_odd_prime(uint64_t ell, uint64_t p) {
    if (ell % 2 == 0 || !arith::is_prime(from_u64(ell)))
        throw Error(ErrorKind::invalid_argument, "torsion index must be an odd prime");
    if (ell == p)
        throw Error(ErrorKind::invalid_argument, "torsion index must differ from the characteristic");
}

}  // namespace

DivisionPolynomial psi(const curve::CurveOverFp& e, uint64_t ell) {
    require_odd_prime(ell, e.p);
    FkTable table(e);
    return DivisionPolynomial{ell, table.get(ell)};
}

std::set<uint64_t> torsion_scan_oracle(const curve::CurveOverFp& e, uint64_t ell) {
    require_odd_prime(ell, e.p);
    if (e.p > (uint64_t{1} << 12))
        throw Error(ErrorKind::resource, "field size exceeds the torsion scan budget");
    std::set<uint64_t> out;
    const Integer k = from_u64(ell);
    for (uint64_t x = 0; x < e.p; ++x) {
        uint64_t v = e.f_eval(x);
        uint64_t y;
        if (v == 0)
            y = 0;
        else if (auto r = fp::sqrt(v, e.p))
            y = *r;
        else
            continue;
        if (curve::scalar_mul(e, k, curve::Point::affine(x, y)).infinity) out.insert(x);
    }
    return out;
}

}  // namespace sea::divpoly
