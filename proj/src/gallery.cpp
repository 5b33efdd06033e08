#include "cfdual/gallery.hpp"

#include "cfdual/eval.hpp"
#include "cfdual/jet_linalg.hpp"
#include "cfdual/lorentz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfdual {

namespace {

Expr num(double v) { return Expr::number(v); }
Expr var(std::size_t i) { return Expr::variable(i); }
Expr sq(const Expr& e) { return pow(e, num(2)); }

Expr sum_squares(std::size_t from, std::size_t to)
{
    Expr s = sq(var(from));
    for (std::size_t i = from + 1; i < to; ++i) s = s + sq(var(i));
    return s;
}

/// (2w, |w|² - 1) / (1 + |w|²) for w = (u_from, ..., u_{to-1}).
std::vector<Expr> inverse_stereographic_expr(std::size_t from, std::size_t to)
{
    const Expr r = sum_squares(from, to);
    std::vector<Expr> p;
    for (std::size_t i = from; i < to; ++i) p.push_back(num(2) * var(i) / (num(1) + r));
    p.push_back((r - num(1)) / (num(1) + r));
    return p;
}

Box pick_box(const GalleryParams& params, Box fallback, std::size_t n)
{
    Box b = params.box ? *params.box : std::move(fallback);
    b.validate();
    if (b.dim() != n) throw std::invalid_argument("gallery: box dimension does not match n");
    return b;
}

FrontalPair sphere_section(std::size_t n, const GalleryParams& params)
{
    const Box box = pick_box(params, Box::cube(n, -1.0, 1.0), n);
    const auto p = inverse_stereographic_expr(0, n);
    std::vector<Expr> x{num(1)}, y{num(-0.5)};
    for (const auto& c : p) {
        x.push_back(c);
        y.push_back(num(0.5) * c);
    }
    return FrontalPair("sphere_section", ChartMap(box, x), ChartMap(box, y));
}

FrontalPair equatorial_nonfront(std::size_t n, const GalleryParams& params)
{
    Box fallback = Box::cube(n, -1.0, 1.0);
    fallback.lo[0] = 0.3;
    fallback.hi[0] = 1.2;
    const Box box = pick_box(params, fallback, n);
    const Expr s = num(std::numbers::sqrt2 / 2.0);
    const Expr norm = Expr::call(Func::Sqrt, sum_squares(0, n));
    std::vector<Expr> x{s}, y{-s};
    for (std::size_t i = 0; i < n; ++i) {
        x.push_back(s * var(i) / norm);
        y.push_back(s * var(i) / norm);
    }
    x.push_back(num(0));
    y.push_back(num(0));
    return FrontalPair("equatorial_nonfront", ChartMap(box, x), ChartMap(box, y));
}

FrontalPair sublightcone(std::size_t n, const GalleryParams& params)
{
    const Box box = pick_box(params, Box::cube(n, -1.0, 1.0), n);
    const Expr ex = Expr::call(Func::Exp, var(0));
    const Expr emx = Expr::call(Func::Exp, -var(0));
    const auto s = inverse_stereographic_expr(1, n);
    std::vector<Expr> x{ex}, y{num(-0.5) * emx};
    for (const auto& c : s) {
        x.push_back(ex * c);
        y.push_back(num(0.5) * emx * c);
    }
    x.push_back(num(0));
    y.push_back(num(0));
    return FrontalPair("sublightcone", ChartMap(box, x), ChartMap(box, y));
}

Jet det(const std::vector<std::vector<const Jet*>>& m)
{
    const std::size_t n = m.size();
    if (n == 1) return *m[0][0];
    if (n == 2) return *m[0][0] * *m[1][1] - *m[0][1] * *m[1][0];
    Jet d = *m[0][0] * 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<std::vector<const Jet*>> minor(n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) minor[i - 1].push_back(m[i][j]);
        const Jet t = *m[0][c] * det(minor);
        if (c % 2) d -= t;
        else d += t;
    }
    return d;
}

FrontalPair clifford_ball(std::size_t n, const GalleryParams& params)
{
    const double r = params.radius;
    const double rho = params.scale;
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("clifford_ball: radius must lie in (0, 1)");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("clifford_ball: scale must lie in (0, 1)");
    if (params.orientation != 1 && params.orientation != -1)
        throw std::invalid_argument("clifford_ball: orientation must be +1 or -1");
    const double s = std::sqrt(1.0 - r * r);
    const double c = rho * std::sqrt((1.0 - s) / (1.0 + s));
    const double sign = params.orientation;
    const Box box = pick_box(params, Box::cube(n, -1.5, 1.5), n);

    // Hypersurface f in H^{n+1} with its unit normal, both at `order`.
    auto hyperbolic = [=](std::span<const double> p, int order) {
        const auto u = coordinate_jets(p, order + 1);
        const auto a = inverse_stereographic(std::span<const Jet>(u).subspan(0, 2));
        const auto b = inverse_stereographic(std::span<const Jet>(u).subspan(2));
        std::vector<Jet> z;
        for (const auto& e : a) z.push_back(r * e);
        for (const auto& e : b) z.push_back(s * e);
        // Stereographic projection S^{n+1} -> R^{n+1} from the last pole, then into the ball of radius rho.
        const Jet k = c * reciprocal(1.0 - z.back());
        std::vector<Jet> v;
        for (std::size_t i = 0; i + 1 < z.size(); ++i) v.push_back(z[i] * k);
        Jet v2 = v[0] * v[0];
        for (std::size_t i = 1; i < v.size(); ++i) v2 += v[i] * v[i];
        const Jet w = reciprocal(1.0 - v2);
        std::vector<Jet> f{(1.0 + v2) * w};
        for (const auto& e : v) f.push_back(2.0 * e * w);

        // Lorentz normal: η times the cofactor vector of [f, ∂_1 f, ..., ∂_n f].
        const std::size_t m = f.size();
        std::vector<std::vector<Jet>> cols{f};
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Jet> d;
            for (const auto& e : f) d.push_back(e.derivative(i));
            cols.push_back(std::move(d));
        }
        std::vector<Jet> nu;
        for (std::size_t row = 0; row < m; ++row) {
            std::vector<std::vector<const Jet*>> minor;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == row) continue;
                std::vector<const Jet*> line;
                for (const auto& col : cols) line.push_back(&col[i]);
                minor.push_back(std::move(line));
            }
            Jet cof = det(minor);
            if (row % 2) cof = -cof;
            nu.push_back(row == 0 ? -cof : cof);
        }
        const Jet scale = sign * reciprocal(sqrt(mink_inner(nu, nu)));
        for (auto& e : nu) e *= scale;
        for (auto& e : f) e = e.truncated(order);
        return std::pair{f, nu};
    };

    const double h = std::numbers::sqrt2 / 2.0;
    ChartMap x(box, n + 2, [hyperbolic, h](std::span<const double> p, int order) {
        auto [f, nu] = hyperbolic(p, order);
        std::vector<Jet> out;
        for (std::size_t i = 0; i < f.size(); ++i) out.push_back(h * (f[i] + nu[i]));
        return out;
    });
    ChartMap y(box, n + 2, [hyperbolic, h](std::span<const double> p, int order) {
        auto [f, nu] = hyperbolic(p, order);
        std::vector<Jet> out;
        for (std::size_t i = 0; i < f.size(); ++i) out.push_back(-h * (f[i] - nu[i]));
        return out;
    });
    return FrontalPair("clifford_ball", std::move(x), std::move(y));
}

} // namespace

std::vector<Jet> inverse_stereographic(std::span<const Jet> u)
{
    if (u.empty()) throw std::invalid_argument("inverse_stereographic: empty argument");
    Jet r = u[0] * u[0];
    for (std::size_t i = 1; i < u.size(); ++i) r += u[i] * u[i];
    const Jet w = reciprocal(1.0 + r);
    std::vector<Jet> p;
    for (const auto& e : u) p.push_back(2.0 * e * w);
    p.push_back((r - 1.0) * w);
    return p;
}

FrontalPair conformal_graph(const Expr& sigma, std::size_t n, std::optional<Box> box)
{
    if (n < 2) throw std::invalid_argument("conformal_graph: n must be at least 2");
    if (sigma.min_dimension() > n) throw std::invalid_argument("conformal_graph: sigma uses a variable beyond n");
    const Box b = box ? *box : Box::cube(n, -1.0, 1.0);
    b.validate();
    if (b.dim() != n) throw std::invalid_argument("conformal_graph: box dimension does not match n");

    ChartMap x(b, n + 2, [sigma](std::span<const double> p, int order) {
        const auto u = coordinate_jets(p, order);
        const auto pt = inverse_stereographic(u);
        const Jet e = exp(eval_jet(sigma, u));
        std::vector<Jet> out{e};
        for (const auto& c : pt) out.push_back(e * c);
        return out;
    });
    ChartMap y(b, n + 2, [sigma, n](std::span<const double> p, int order) {
        const auto u = coordinate_jets(p, order + 1);
        const auto pt = inverse_stereographic(u);
        const Jet sg = eval_jet(sigma, u);
        Jet r = u[0] * u[0];
        for (std::size_t i = 1; i < n; ++i) r += u[i] * u[i];
        // Round metric 4 (1+|u|²)^{-2} δ, so g^{jk} = (1+|u|²)²/4 δ^{jk}.
        const Jet ginv = 0.25 * (1.0 + r) * (1.0 + r);
        std::vector<Jet> ds;
        for (std::size_t j = 0; j < n; ++j) ds.push_back(sg.derivative(j));
        Jet grad2 = ds[0] * ds[0];
        for (std::size_t j = 1; j < n; ++j) grad2 += ds[j] * ds[j];
        grad2 *= ginv;
        std::vector<Jet> alpha(n + 1, Jet(n, order, 0.0));
        for (std::size_t j = 0; j < n; ++j) {
            const Jet w = ginv * ds[j];
            for (std::size_t k = 0; k <= n; ++k) alpha[k] += w * pt[k].derivative(j);
        }
        const Jet half = 0.5 * exp(-sg);
        std::vector<Jet> out{half * (-1.0 - grad2)};
        for (std::size_t k = 0; k <= n; ++k) out.push_back(half * (pt[k] - grad2 * pt[k] - 2.0 * alpha[k]));
        return out;
    });
    return FrontalPair("conformal_graph", std::move(x), std::move(y));
}

const std::vector<GalleryEntry>& gallery_list()
{
    static const std::vector<GalleryEntry> entries{
        {"sphere_section", "x = (1, p), y = (-1, p)/2 with p the inverse stereographic chart of S^n", 2,
         "[-1, 1]^n", {}},
        {"equatorial_nonfront",
         "x = (1, w/|w|, 0)/sqrt(2), y = (-1, w/|w|, 0)/sqrt(2): a spacelike frontal that is not a front", 2,
         "u1 in [0.3, 1.2], others [-1, 1]", {}},
        {"sublightcone", "x = e^{u1} (1, s(w), 0) in the slice z^{n+1} = 0: immersed but not spacelike", 2,
         "[-1, 1]^n", {}},
        {"conformal_graph", "x = e^sigma (1, p) over the stereographic chart with its explicit dual", 2, "[-1, 1]^n",
         {{"sigma", "expression", "0", "conformal factor exponent in u1..un"}}},
        {"clifford_ball",
         "S^2(r) x S^{n-2}(sqrt(1-r^2)) placed in the ball model of H^{n+1}; y from the unit normal", 3,
         "[-1.5, 1.5]^n",
         {{"radius", "number", "0.6", "radius r of the S^2 factor, 0 < r < 1"},
          {"scale", "number", "0.8", "radius of the image inside the unit ball, 0 < scale < 1"},
          {"orientation", "integer", "-1", "sign of the unit normal (+1 or -1)"}}},
    };
    return entries;
}

FrontalPair gallery(std::string_view name, std::size_t n, const GalleryParams& params)
{
    for (const auto& e : gallery_list()) {
        if (e.name != name) continue;
        if (n < e.min_dim || n + 2 > kMaxJetDim + 2)
            throw std::invalid_argument("gallery " + e.name + ": dimension " + std::to_string(n) + " not supported");
        if (name == "sphere_section") return sphere_section(n, params);
        if (name == "equatorial_nonfront") return equatorial_nonfront(n, params);
        if (name == "sublightcone") return sublightcone(n, params);
        if (name == "conformal_graph") return conformal_graph(params.sigma.value_or(Expr::number(0)), n, params.box);
        if (name == "clifford_ball") return clifford_ball(n, params);
    }
    throw std::invalid_argument("unknown gallery entry '" + std::string(name) + "'");
}

} // namespace cfdual
