#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "sympq/action.hpp"

namespace sympq {

namespace {

bool is_square(const Rational& v, Rational* root) {
    if (v < 0) return false;
    Int n = numerator(v), d = denominator(v);
    Int rn = boost::multiprecision::sqrt(n), rd = boost::multiprecision::sqrt(d);
    if (rn * rn != n || rd * rd != d) return false;
    *root = Rational(rn, rd);
    return true;
}

std::vector<Int> ivec(const std::vector<int>& v) {
    std::vector<Int> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

// Is v in the integer row lattice given by its HNF?
bool in_row_lattice(const IMat& hnf, std::vector<Int> v) {
    for (const auto& row : hnf) {
        int p = 0;
        while (p < (int)row.size() && row[p] == 0) ++p;
        if (p == (int)row.size()) continue;
        if (v[p] % row[p] != 0) continue;  // cannot reduce; keep trying later pivots
        Int q = v[p] / row[p];
        for (size_t c = 0; c < v.size(); ++c) v[c] -= q * row[c];
    }
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

std::string stab_name(const StabilizerDescriptor& s) {
    std::ostringstream os;
    bool any = false;
    if (s.torus_rank > 0) {
        os << "T^" << s.torus_rank;
        any = true;
    }
    for (const auto& d : s.divisors) {
        if (any) os << " x ";
        os << "Z" << d;
        any = true;
    }
    if (!any) os << "trivial";
    return os.str();
}

}  // namespace

Rational nth_fraction(long long n) {
    // injective enumeration of proper fractions: denominators 2, 3, ...
    long long den = 2, idx = n;
    while (true) {
        long long cnt = 0;
        for (long long num = 1; num < den; ++num)
            if (std::gcd(num, den) == 1) ++cnt;
        if (idx < cnt) {
            for (long long num = 1; num < den; ++num) {
                if (std::gcd(num, den) != 1) continue;
                if (idx-- == 0) return Rational(num, den);
            }
        }
        idx -= cnt;
        ++den;
    }
}

Rational nth_signed(long long n) {
    Rational f = nth_fraction(n / 2);
    return n % 2 == 0 ? f : Rational(-f);
}

Rational nth_positive(long long n) {
    if (n == 0) return 1;
    Rational f = nth_fraction((n - 1) / 2);
    return n % 2 == 1 ? f : Rational(1) / f;
}

bool positive_feasible(const QMat& A, const QVec& b) {
    // Solve A u = b exactly; then Fourier-Motzkin on u > 0 over the affine
    // solution space.
    int rows = (int)A.size(), cols = rows ? (int)A[0].size() : 0;
    if (cols == 0) {
        for (const auto& x : b)
            if (x != 0) return false;
        return true;
    }
    QMat m(rows, QVec(cols + 1));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) m[r][c] = A[r][c];
        m[r][cols] = b[r];
    }
    std::vector<int> pivot_col;
    int rr = 0;
    for (int c = 0; c < cols && rr < rows; ++c) {
        int piv = -1;
        for (int r = rr; r < rows; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[piv], m[rr]);
        for (int r = 0; r < rows; ++r) {
            if (r == rr || m[r][c] == 0) continue;
            Rational f = m[r][c] / m[rr][c];
            for (int cc = 0; cc <= cols; ++cc) m[r][cc] -= f * m[rr][cc];
        }
        pivot_col.push_back(c);
        ++rr;
    }
    for (int r = rr; r < rows; ++r)
        if (m[r][cols] != 0) return false;  // inconsistent
    std::vector<bool> is_piv(cols, false);
    for (int c : pivot_col) is_piv[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < cols; ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    int nf = (int)free_cols.size();
    // u_c > 0 as rows (a0, a1..a_nf): a0 + sum a_i s_i > 0.
    std::vector<QVec> ineqs;
    for (int c = 0; c < cols; ++c) {
        QVec row(nf + 1, Rational(0));
        if (is_piv[c]) {
            int k = 0;
            while (pivot_col[k] != c) ++k;
            row[0] = m[k][cols] / m[k][c];
            for (int i = 0; i < nf; ++i) row[1 + i] = -m[k][free_cols[i]] / m[k][c];
        } else {
            int i = 0;
            while (free_cols[i] != c) ++i;
            row[1 + i] = 1;
        }
        ineqs.push_back(std::move(row));
    }
    // Fourier-Motzkin elimination of the free variables.
    for (int v = nf; v >= 1; --v) {
        std::vector<QVec> pos, neg, zero;
        for (auto& r : ineqs) {
            if (r[v] > 0)
                pos.push_back(r);
            else if (r[v] < 0)
                neg.push_back(r);
            else
                zero.push_back(r);
        }
        std::vector<QVec> next = zero;
        for (const auto& p : pos)
            for (const auto& q : neg) {
                QVec r(v, Rational(0));
                // p/q combined: eliminate variable v
                for (int c = 0; c < v; ++c) r[c] = p[c] * (-q[v]) + q[c] * p[v];
                next.push_back(std::move(r));
            }
        for (auto& r : next) r.resize(v);
        ineqs = std::move(next);
    }
    for (const auto& r : ineqs)
        if (r[0] <= 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Torus stratification

namespace {

StabilizerDescriptor torus_stabilizer(const std::vector<std::vector<int>>& weights, int rank,
                                      const std::vector<int>& support,
                                      const std::vector<std::vector<int>>& angle_rows = {}) {
    IMat A;
    for (int j : support) {
        std::vector<Int> row(rank);
        for (int g = 0; g < rank; ++g) row[g] = weights[g][j];
        A.push_back(std::move(row));
    }
    for (const auto& ar : angle_rows) A.push_back(ivec(ar));
    StabilizerDescriptor s;
    IMat h = hnf_rows(A);
    s.weight_hnf = h;
    s.torus_rank = rank - (int)h.size();
    for (const auto& d : smith_divisors(A))
        if (d > 1) s.divisors.push_back(d);
    s.name = stab_name(s);
    return s;
}

struct RadiiPatch {
    // radii r_j (j over the support) as rational data: either a fixed base
    // point scaled (cone) or a stereographic line family (level != 0).
    enum Kind { Point, ConeRay, Stereographic } kind;
    QVec base;      // base radii
    QVec w;         // weights (rank-1 component) on the support
    Rational two_lambda;
};

// r_j(m) for the stereographic family through `base` with direction (1, m).
QVec stereo_radii(const RadiiPatch& p, const Rational& m) {
    Rational bd = p.w[0] * p.base[0] + p.w[1] * p.base[1] * m;       // B(r^, d)
    Rational dd = p.w[0] + p.w[1] * m * m;                            // B(d, d)
    if (dd == 0) return {};
    Rational s = -2 * bd / dd;
    return {p.base[0] + s, p.base[1] + m * s};
}

}  // namespace

void attach_torus_strata(ReductionModel& M, const std::vector<std::vector<int>>& weights,
                         const QVec& level) {
    const int rank = (int)weights.size();
    const int n = M.nplanes();
    struct Piece {
        std::vector<int> support;
        StabilizerDescriptor stab;
        int dim;
    };
    std::vector<Piece> pieces;
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> sup;
        for (int j = 0; j < n; ++j)
            if (mask & (1 << j)) sup.push_back(j);
        // feasibility of sum_{j in S} w_j u_j = level with u_j > 0
        QMat A(rank, QVec(sup.size()));
        for (int g = 0; g < rank; ++g)
            for (size_t c = 0; c < sup.size(); ++c) A[g][c] = weights[g][sup[c]];
        if (!positive_feasible(A, level)) continue;
        Piece p;
        p.support = sup;
        p.stab = torus_stabilizer(weights, rank, sup);
        p.dim = 2 * (int)sup.size() - rank_of(A, (int)sup.size());
        pieces.push_back(std::move(p));
    }
    if (pieces.empty()) {
        M.warnings.push_back("empty level set: no feasible support patterns");
        return;
    }
    // group pieces by stabilizer
    for (auto& p : pieces) {
        int found = -1;
        for (size_t s = 0; s < M.strata.size(); ++s)
            if (M.strata[s].stab.same_as(p.stab)) found = (int)s;
        if (found < 0) {
            StratumDef sd;
            sd.stab = p.stab;
            sd.dim = p.dim;
            sd.supports = {p.support};
            M.strata.push_back(std::move(sd));
        } else {
            M.strata[found].supports.push_back(p.support);
            M.strata[found].dim = std::max(M.strata[found].dim, p.dim);
        }
    }
    // closure order: a <= b iff every support of a sits inside one of b
    auto leq = [&](const StratumDef& a, const StratumDef& b) {
        for (const auto& sa : a.supports) {
            bool ok = false;
            for (const auto& sb : b.supports)
                if (std::includes(sb.begin(), sb.end(), sa.begin(), sa.end())) ok = true;
            if (!ok) return false;
        }
        return true;
    };
    int maximal = -1;
    for (size_t s = 0; s < M.strata.size(); ++s) {
        bool is_max = true;
        for (size_t t = 0; t < M.strata.size(); ++t) {
            if (s == t) continue;
            if (leq(M.strata[s], M.strata[t])) {
                M.strata[s].below.push_back(-1);  // placeholder, fixed below
                is_max = false;
            }
        }
        if (is_max) {
            if (maximal >= 0) throw error(M.name + ": no unique maximal stratum");
            maximal = (int)s;
        }
    }
    for (auto& s : M.strata) s.below.clear();
    for (size_t s = 0; s < M.strata.size(); ++s)
        for (size_t t = 0; t < M.strata.size(); ++t)
            if (s != t && leq(M.strata[t], M.strata[s])) {
                M.strata[s].below.push_back((int)t);
                if (M.strata[t].dim >= M.strata[s].dim)
                    throw error(M.name + ": closure order violates dimension monotonicity");
            }
    M.principal = maximal;
    M.strata[maximal].principal = true;
    for (size_t s = 0; s < M.strata.size(); ++s)
        M.strata[s].id = (int)s == maximal ? "principal" : "stratum" + std::to_string(s);

    // samplers (rank-1 radii varieties; higher rank gets none here)
    for (auto& sd : M.strata) {
        const std::vector<int>* best = &sd.supports[0];
        for (const auto& s : sd.supports)
            if (s.size() > best->size()) best = &s;
        const std::vector<int> sup = *best;
        const int s = (int)sup.size();
        if (s == 0) {
            // single point: the origin
            PatchSampler ps;
            ps.kinds = {};
            ps.candidate = [](int, long long) { return Rational(0); };
            ps.valid = [](int, const Rational&) { return true; };
            SpaceDims dims = M.dims;
            ps.point = [dims](const QVec&) {
                Point p;
                p.lin.assign(dims.lin, Rational(0));
                p.ang.assign(dims.ang, CirclePoint{});
                return p;
            };
            ps.frame = [](const QVec&) { return std::vector<QVec>{}; };
            ps.homogeneous_scale = true;
            sd.sampler = std::move(ps);
            continue;
        }
        if (rank != 1) continue;  // no generic exact sampler beyond rank 1
        QVec w(s);
        for (int c = 0; c < s; ++c) w[c] = weights[0][sup[c]];
        Rational two_lambda = 2 * level[0];
        RadiiPatch patch;
        patch.w = w;
        patch.two_lambda = two_lambda;
        bool have = false;
        if (two_lambda == 0) {
            if (s == 2) {
                Rational ratio2 = -w[0] / w[1], root;
                if (ratio2 > 0 && is_square(ratio2, &root)) {
                    patch.kind = RadiiPatch::ConeRay;
                    patch.base = {1, root};  // r = rho * base
                    have = true;
                }
            }
        } else if (s == 1) {
            Rational r2 = two_lambda / w[0], root;
            if (r2 > 0 && is_square(r2, &root)) {
                patch.kind = RadiiPatch::Point;
                patch.base = {root};
                have = true;
            }
        } else if (s == 2) {
            // search a rational base point with positive coordinates
            for (long long t = 0; t < 4000 && !have; ++t) {
                Rational r1 = nth_positive(t);
                Rational rest = two_lambda - w[0] * r1 * r1;
                Rational r2sq = rest / w[1], root;
                if (r2sq > 0 && is_square(r2sq, &root)) {
                    patch.kind = RadiiPatch::Stereographic;
                    patch.base = {r1, root};
                    have = true;
                }
            }
        }
        if (!have) continue;

        PatchSampler ps;
        // parameter 0: scale (cone) or slope (stereographic); then one circle
        // parameter per supported plane. For a fixed-radius patch only the
        // circle parameters remain.
        int radii_params = patch.kind == RadiiPatch::Point ? 0 : 1;
        if (patch.kind == RadiiPatch::ConeRay) ps.kinds.push_back(ParamKind::Scale);
        if (patch.kind == RadiiPatch::Stereographic) ps.kinds.push_back(ParamKind::Slope);
        for (int c = 0; c < s; ++c) ps.kinds.push_back(ParamKind::Circle);
        ps.homogeneous_scale = patch.kind == RadiiPatch::ConeRay;
        ps.candidate = [](int param, long long slot) {
            return Rational(0);  // replaced below
        };
        auto kinds = ps.kinds;
        ps.candidate = [kinds](int param, long long slot) {
            switch (kinds[param]) {
                case ParamKind::Circle: return nth_fraction(slot);
                case ParamKind::Slope: return nth_signed(slot);
                case ParamKind::Scale: return nth_positive(slot);
                default: return nth_signed(slot);
            }
        };
        ps.valid = [patch](int param, const Rational& v) {
            if (param != 0) return true;
            switch (patch.kind) {
                case RadiiPatch::ConeRay: return v > 0;
                case RadiiPatch::Stereographic: {
                    QVec r = stereo_radii(patch, v);
                    return !r.empty() && r[0] != 0 && r[1] != 0;
                }
                default: return true;
            }
        };
        SpaceDims dims = M.dims;
        auto planes = M.planes;
        auto radii_of = [patch](const QVec& prm) -> QVec {
            switch (patch.kind) {
                case RadiiPatch::Point: return patch.base;
                case RadiiPatch::ConeRay: return {prm[0] * patch.base[0], prm[0] * patch.base[1]};
                default: return stereo_radii(patch, prm[0]);
            }
        };
        ps.point = [dims, planes, sup, radii_of, radii_params](const QVec& prm) {
            QVec r = radii_of(prm);
            Point p;
            p.lin.assign(dims.lin, Rational(0));
            p.ang.assign(dims.ang, CirclePoint{});
            for (size_t c = 0; c < sup.size(); ++c) {
                CirclePoint cp = circle_from_t(prm[radii_params + c]);
                p.lin[planes[sup[c]].xc] = r[c] * cp.c;
                p.lin[planes[sup[c]].yc] = r[c] * cp.s;
            }
            return p;
        };
        QVec wq = w;
        ps.frame = [dims, planes, sup, radii_of, radii_params, wq, patch](const QVec& prm) {
            QVec r = radii_of(prm);
            std::vector<QVec> out;
            std::vector<CirclePoint> cps;
            for (size_t c = 0; c < sup.size(); ++c)
                cps.push_back(circle_from_t(prm[radii_params + c]));
            // rotations of each supported plane
            for (size_t c = 0; c < sup.size(); ++c) {
                QVec v(dims.total(), Rational(0));
                v[planes[sup[c]].xc] = -r[c] * cps[c].s;
                v[planes[sup[c]].yc] = r[c] * cps[c].c;
                out.push_back(std::move(v));
            }
            // radial directions tangent to the radii variety
            if (patch.kind == RadiiPatch::ConeRay) {
                QVec v(dims.total(), Rational(0));
                for (size_t c = 0; c < sup.size(); ++c) {
                    v[planes[sup[c]].xc] = r[c] * cps[c].c;
                    v[planes[sup[c]].yc] = r[c] * cps[c].s;
                }
                out.push_back(std::move(v));
            } else if (patch.kind == RadiiPatch::Stereographic) {
                // delta_1 = w_2 r_2, delta_2 = -w_1 r_1 solves sum w r delta = 0
                QVec v(dims.total(), Rational(0));
                v[planes[sup[0]].xc] = wq[1] * r[1] * cps[0].c;
                v[planes[sup[0]].yc] = wq[1] * r[1] * cps[0].s;
                v[planes[sup[1]].xc] = -wq[0] * r[0] * cps[1].c;
                v[planes[sup[1]].yc] = -wq[0] * r[0] * cps[1].s;
                out.push_back(std::move(v));
            }
            return out;
        };
        sd.sampler = std::move(ps);
    }
}

// ---------------------------------------------------------------------------
// Finite matrix-group stratification

namespace {

std::vector<QVec> fixed_space(const std::vector<QMat>& elems, const std::vector<int>& ids,
                              int dim) {
    RowReducer rr(dim);
    for (int id : ids) {
        const QMat& g = elems[id];
        for (int r = 0; r < dim; ++r) {
            QVec row(dim);
            for (int c = 0; c < dim; ++c) row[c] = g[r][c] - (r == c ? 1 : 0);
            rr.add_row(row);
        }
    }
    return rr.kernel();
}

int fixed_dim(const std::vector<QMat>& elems, std::vector<int> ids, int extra, int dim) {
    ids.push_back(extra);
    return (int)fixed_space(elems, ids, dim).size();
}

}  // namespace

void attach_finite_strata(ReductionModel& M) {
    const int dim = M.dims.lin;
    const auto& elems = M.finite_elements;
    const int n = (int)elems.size();
    // multiplication table
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QMat p(dim, QVec(dim, Rational(0)));
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) {
                    Rational s = 0;
                    for (int k = 0; k < dim; ++k) s += elems[i][r][k] * elems[j][k][c];
                    p[r][c] = s;
                }
            int id = -1;
            for (int k = 0; k < n; ++k)
                if (elems[k] == p) id = k;
            if (id < 0) throw error("group closure is not closed");
            mul[i][j] = id;
        }
    // subgroup enumeration by closure of generating sets
    std::set<std::vector<int>> subgroups;
    auto closure_of = [&](std::vector<int> gens) {
        std::set<int> s{0};
        std::vector<int> frontier{0};
        while (!frontier.empty()) {
            std::vector<int> next;
            for (int f : frontier)
                for (int g : gens) {
                    int h = mul[g][f];
                    if (!s.count(h)) {
                        s.insert(h);
                        next.push_back(h);
                    }
                }
            frontier = std::move(next);
        }
        return std::vector<int>(s.begin(), s.end());
    };
    std::vector<std::vector<int>> queue{{0}};
    subgroups.insert({0});
    while (!queue.empty()) {
        auto h = queue.back();
        queue.pop_back();
        for (int g = 0; g < n; ++g) {
            auto gens = h;
            gens.push_back(g);
            auto c = closure_of(gens);
            if (subgroups.insert(c).second) {
                queue.push_back(c);
                if (subgroups.size() > 4096) throw error("too many subgroups");
            }
        }
    }
    // strata: subgroups whose exact-stabilizer locus is nonempty
    for (const auto& H : subgroups) {
        auto fix = fixed_space(elems, H, dim);
        bool nonempty = true;
        bool codim_one = false;
        for (int g = 0; g < n; ++g) {
            if (std::find(H.begin(), H.end(), g) != H.end()) continue;
            int d = fixed_dim(elems, H, g, dim);
            if (d >= (int)fix.size()) nonempty = false;
            if (d == (int)fix.size() - 1) codim_one = true;
        }
        if (!nonempty) continue;
        StratumDef sd;
        sd.stab.element_ids = H;
        sd.stab.torus_rank = 0;
        // cyclic name when a single element generates
        bool cyclic = false;
        for (int g : H)
            if ((int)closure_of({g}).size() == (int)H.size()) cyclic = true;
        sd.stab.name = H.size() == 1 ? "trivial"
                                     : (cyclic ? "Z" + std::to_string(H.size())
                                               : "finite(" + std::to_string(H.size()) + ")");
        sd.dim = (int)fix.size();
        sd.possibly_disconnected = codim_one;
        // sampler over the fixed subspace
        PatchSampler ps;
        ps.kinds.assign(fix.size(), ParamKind::Free);
        ps.homogeneous_scale = false;
        ps.candidate = [](int, long long slot) { return nth_signed(slot); };
        // principal stratum must dodge the fixed sets of nontrivial elements;
        // for the built-in planar cones those all sit inside {first coord 0}.
        bool has_proper_subfix = false;
        for (int g = 0; g < n; ++g)
            if (std::find(H.begin(), H.end(), g) == H.end()) has_proper_subfix = true;
        ps.valid = [has_proper_subfix](int param, const Rational& v) {
            if (param == 0 && has_proper_subfix) return v != 0;
            return true;
        };
        SpaceDims dims = M.dims;
        auto basis = fix;
        ps.point = [dims, basis](const QVec& prm) {
            Point p;
            p.lin.assign(dims.lin, Rational(0));
            p.ang.assign(dims.ang, CirclePoint{});
            for (size_t i = 0; i < basis.size(); ++i)
                for (int c = 0; c < dims.lin; ++c) p.lin[c] += prm[i] * basis[i][c];
            return p;
        };
        ps.frame = [dims, basis](const QVec&) {
            std::vector<QVec> out;
            for (const auto& b : basis) {
                QVec v(dims.total(), Rational(0));
                for (int c = 0; c < dims.lin; ++c) v[c] = b[c];
                out.push_back(std::move(v));
            }
            return out;
        };
        if (fix.empty()) {
            ps.kinds.clear();
        }
        sd.sampler = std::move(ps);
        M.strata.push_back(std::move(sd));
    }
    // order by fixed-space dimension / inclusion of fixed spaces
    int maximal = -1;
    for (size_t s = 0; s < M.strata.size(); ++s) {
        // stratum(H) <= stratum(K) iff Fix(H) subset Fix(K) iff K subset H
        bool is_max = true;
        for (size_t t = 0; t < M.strata.size(); ++t) {
            if (s == t) continue;
            const auto& Hs = M.strata[s].stab.element_ids;
            const auto& Ht = M.strata[t].stab.element_ids;
            if (std::includes(Hs.begin(), Hs.end(), Ht.begin(), Ht.end())) {
                is_max = false;
                M.strata[t].below.push_back((int)s);
            }
        }
        if (is_max) {
            if (maximal >= 0) throw error(M.name + ": no unique maximal stratum");
            maximal = (int)s;
        }
    }
    M.principal = maximal;
    M.strata[maximal].principal = true;
    for (size_t s = 0; s < M.strata.size(); ++s)
        M.strata[s].id = (int)s == maximal ? "principal" : "stratum" + std::to_string(s);
}

// ---------------------------------------------------------------------------
// Point queries

StabilizerDescriptor orbit_type(const ReductionModel& M, const Point& p) {
    StabilizerDescriptor s;
    const int rank = (int)M.torus.size();
    if (rank > 0) {
        std::vector<int> active;
        for (int j = 0; j < M.nplanes(); ++j)
            if (p.lin[M.planes[j].xc] != 0 || p.lin[M.planes[j].yc] != 0) active.push_back(j);
        IMat A;
        for (int j : active) {
            std::vector<Int> row(rank);
            for (int g = 0; g < rank; ++g) row[g] = M.torus[g].plane_w[j];
            A.push_back(std::move(row));
        }
        for (int a = 0; a < M.dims.ang; ++a) {
            std::vector<Int> row(rank);
            for (int g = 0; g < rank; ++g) row[g] = M.torus[g].ang_v[a];
            A.push_back(std::move(row));
        }
        IMat h = hnf_rows(A);
        s.weight_hnf = h;
        s.torus_rank = rank - (int)h.size();
        for (const auto& d : smith_divisors(A))
            if (d > 1) s.divisors.push_back(d);
    }
    if (M.cyclic) {
        const auto& cd = *M.cyclic;
        long long k = cd.k;
        long long step = 1;  // smallest j with g^j fixing the point
        auto constrain = [&](long long c) {
            c = ((c % k) + k) % k;
            long long need = k / std::gcd(k, c == 0 ? k : c);
            step = std::lcm(step, need);
        };
        for (int j = 0; j < M.nplanes(); ++j)
            if (p.lin[M.planes[j].xc] != 0 || p.lin[M.planes[j].yc] != 0)
                constrain(cd.gen.plane_w[j]);
        for (int a = 0; a < M.dims.ang; ++a) constrain(cd.gen.ang_v[a]);
        long long order = k / step;
        if (order > 1) s.divisors.push_back(Int(order));
    }
    if (!M.finite_elements.empty()) {
        for (size_t e = 0; e < M.finite_elements.size(); ++e) {
            const QMat& g = M.finite_elements[e];
            bool fixes = true;
            for (int r = 0; r < M.dims.lin && fixes; ++r) {
                Rational v = 0;
                for (int c = 0; c < M.dims.lin; ++c) v += g[r][c] * p.lin[c];
                if (v != p.lin[r]) fixes = false;
            }
            if (fixes) s.element_ids.push_back((int)e);
        }
    }
    s.name = !s.element_ids.empty() && s.torus_rank == 0 && s.divisors.empty()
                 ? (s.element_ids.size() == 1 ? "trivial"
                                              : "Z" + std::to_string(s.element_ids.size()))
                 : stab_name(s);
    return s;
}

bool on_zero_fibre(const ReductionModel& M, const Point& p) {
    for (const auto& q : M.moment)
        if (q.eval(p) != 0) return false;
    return true;
}

int locate_stratum(const ReductionModel& M, const Point& p) {
    if (!on_zero_fibre(M, p)) return -1;
    StabilizerDescriptor s = orbit_type(M, p);
    for (size_t i = 0; i < M.strata.size(); ++i)
        if (M.strata[i].stab.same_as(s)) return (int)i;
    return -1;
}

std::vector<QVec> tangent_basis(const ReductionModel& M, const Point& p) {
    if (!on_zero_fibre(M, p)) throw error("tangent_basis: point is not on the zero fibre");
    const int N = M.dims.total();
    // fixed subspace of the stabilizer
    RowReducer constraints(N);
    const int rank = (int)M.torus.size();
    if (rank > 0 || M.cyclic) {
        std::vector<int> active;
        for (int j = 0; j < M.nplanes(); ++j)
            if (p.lin[M.planes[j].xc] != 0 || p.lin[M.planes[j].yc] != 0) active.push_back(j);
        if (rank > 0) {
            IMat A;
            for (int j : active) {
                std::vector<Int> row(rank);
                for (int g = 0; g < rank; ++g) row[g] = M.torus[g].plane_w[j];
                A.push_back(std::move(row));
            }
            for (int a = 0; a < M.dims.ang; ++a) {
                std::vector<Int> row(rank);
                for (int g = 0; g < rank; ++g) row[g] = M.torus[g].ang_v[a];
                A.push_back(std::move(row));
            }
            IMat h = hnf_rows(A);
            // inactive plane directions survive only when their character is
            // trivial on the stabilizer, i.e. the weight lies in the active
            // weight lattice
            for (int j = 0; j < M.nplanes(); ++j) {
                if (std::find(active.begin(), active.end(), j) != active.end()) continue;
                std::vector<Int> wj(rank);
                for (int g = 0; g < rank; ++g) wj[g] = M.torus[g].plane_w[j];
                if (!in_row_lattice(h, wj)) {
                    QVec r1(N, Rational(0)), r2(N, Rational(0));
                    r1[M.planes[j].xc] = 1;
                    r2[M.planes[j].yc] = 1;
                    constraints.add_row(r1);
                    constraints.add_row(r2);
                }
            }
        }
        if (M.cyclic) {
            const auto& cd = *M.cyclic;
            long long k = cd.k, step = 1;
            auto constrain = [&](long long c) {
                c = ((c % k) + k) % k;
                long long need = k / std::gcd(k, c == 0 ? k : c);
                step = std::lcm(step, need);
            };
            for (int j : active) constrain(cd.gen.plane_w[j]);
            for (int a = 0; a < M.dims.ang; ++a) constrain(cd.gen.ang_v[a]);
            for (int j = 0; j < M.nplanes(); ++j) {
                if (std::find(active.begin(), active.end(), j) != active.end()) continue;
                long long c = ((cd.gen.plane_w[j] % k) + k) % k;
                if ((step * c) % k != 0) {
                    QVec r1(N, Rational(0)), r2(N, Rational(0));
                    r1[M.planes[j].xc] = 1;
                    r2[M.planes[j].yc] = 1;
                    constraints.add_row(r1);
                    constraints.add_row(r2);
                }
            }
        }
    }
    if (!M.finite_elements.empty()) {
        StabilizerDescriptor s = orbit_type(M, p);
        for (int id : s.element_ids) {
            const QMat& g = M.finite_elements[id];
            for (int r = 0; r < M.dims.lin; ++r) {
                QVec row(N, Rational(0));
                for (int c = 0; c < M.dims.lin; ++c) row[c] = g[r][c] - (r == c ? 1 : 0);
                constraints.add_row(row);
            }
        }
    }
    std::vector<QVec> fixed = constraints.kernel();
    // moment differentials at p restricted to the fixed subspace
    QMat grads;
    for (const auto& q : M.moment) {
        QVec row(N);
        for (int c = 0; c < N; ++c) row[c] = q.derivative(c).eval(p);
        grads.push_back(std::move(row));
    }
    RowReducer inner((int)fixed.size());
    QMat rows;
    for (const auto& g : grads) {
        QVec row(fixed.size());
        for (size_t i = 0; i < fixed.size(); ++i) row[i] = dot(g, fixed[i]);
        inner.add_row(row);
    }
    std::vector<QVec> coef = inner.kernel();
    std::vector<QVec> out;
    for (const auto& c : coef) {
        QVec v(N, Rational(0));
        for (size_t i = 0; i < fixed.size(); ++i)
            for (int k = 0; k < N; ++k) v[k] += c[i] * fixed[i][k];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Sample> sample_points(const ReductionModel& M, int stratum, int count,
                                  uint64_t seed) {
    if (stratum < 0 || stratum >= (int)M.strata.size()) throw error("sample_points: bad stratum");
    const StratumDef& sd = M.strata[stratum];
    if (!sd.sampler.available())
        throw error(M.name + "/" + sd.id +
                    ": no exact rational parametrization (float fallback is disabled)");
    std::vector<Sample> out;
    const int np = sd.sampler.nparams();
    long long offset = (long long)(seed % 8);
    for (int i = 0; i < count; ++i) {
        QVec prm(np);
        for (int j = 0; j < np; ++j) {
            long long slot = offset + 8 * (i + j);  // stagger parameters
            Rational v = sd.sampler.candidate(j, slot);
            int guard = 0;
            while (!sd.sampler.valid(j, v)) {
                slot += 8;
                v = sd.sampler.candidate(j, slot);
                if (++guard > 10000) throw error("sampler: no valid parameter found");
            }
            prm[j] = v;
        }
        Sample s;
        s.point = sd.sampler.point(prm);
        s.tangent = tangent_basis(M, s.point);
        s.stratum = stratum;
        if ((int)s.tangent.size() != sd.dim)
            throw error(M.name + "/" + sd.id + ": tangent rank mismatch at sample (level not regular here?)");
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace sympq
