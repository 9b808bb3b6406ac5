#include "sympq/form.hpp"

#include <algorithm>
#include <sstream>

namespace sympq {

namespace {

// Merge two strictly increasing index lists; returns the permutation sign,
// or 0 on a repeated index.
int merge_indices(const IndexList& a, const IndexList& b, IndexList& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int sign = 1;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining entries of a.
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return sign;
}

// Insert idx into a strictly increasing list; sign = (-1)^(position).
int insert_index(const IndexList& l, int idx, IndexList& out) {
    out.clear();
    out.reserve(l.size() + 1);
    int sign = 1;
    size_t i = 0;
    for (; i < l.size() && l[i] < idx; ++i) {
        out.push_back(l[i]);
        sign = -sign;
    }
    if (i < l.size() && l[i] == idx) return 0;
    out.push_back(idx);
    for (; i < l.size(); ++i) out.push_back(l[i]);
    return sign;
}

Rational det_small(std::vector<std::vector<Rational>> m) {
    const size_t k = m.size();
    Rational det = 1;
    for (size_t c = 0; c < k; ++c) {
        size_t piv = c;
        while (piv < k && m[piv][c] == 0) ++piv;
        if (piv == k) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < k; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (size_t cc = c; cc < k; ++cc) m[r][cc] -= f * m[c][cc];
        }
    }
    return det;
}

}  // namespace

VectorField VectorField::zero(SpaceDims d) {
    VectorField v;
    v.dims = d;
    v.comp.assign(d.total(), Poly(d));
    return v;
}

Form Form::from_poly(const Poly& p) {
    Form f(p.dims(), 0);
    f.add_component({}, p);
    return f;
}

Form Form::covector(SpaceDims d, int coord) {
    if (coord < 0 || coord >= d.total()) throw error("Form::covector: index out of range");
    Form f(d, 1);
    f.add_component({coord}, Poly::constant(d, 1));
    return f;
}

Form Form::monomial(SpaceDims d, const IndexList& idx, const Poly& coeff) {
    Form f(d, (int)idx.size());
    f.add_component(idx, coeff);
    return f;
}

const Poly* Form::component(const IndexList& idx) const {
    auto it = comps_.find(idx);
    return it == comps_.end() ? nullptr : &it->second;
}

int Form::coeff_degree() const {
    int d = -1;
    for (const auto& [i, p] : comps_) d = std::max(d, p.degree());
    return d;
}

int Form::max_abs_freq() const {
    int f = 0;
    for (const auto& [i, p] : comps_) f = std::max(f, p.max_abs_freq());
    return f;
}

bool Form::coeff_homogeneous(int* deg_out) const {
    int d = -2;
    for (const auto& [i, p] : comps_) {
        int pd;
        if (!p.is_homogeneous(&pd)) return false;
        if (d == -2)
            d = pd;
        else if (d != pd)
            return false;
    }
    if (deg_out) *deg_out = d == -2 ? 0 : d;
    return true;
}

void Form::add_component(const IndexList& idx, const Poly& p) {
    if ((int)idx.size() != degree_) throw error("Form::add_component: wrong index arity");
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= dims_.total()) throw error("Form component index out of range");
        if (i + 1 < idx.size() && idx[i] >= idx[i + 1])
            throw error("Form component indices must be strictly increasing");
    }
    if (p.is_zero()) return;
    require_same(dims_, p.dims(), "form component");
    auto it = comps_.find(idx);
    if (it == comps_.end()) {
        comps_.emplace(idx, p);
    } else {
        it->second += p;
        if (it->second.is_zero()) comps_.erase(it);
    }
}

Form& Form::operator+=(const Form& o) {
    require_same(dims_, o.dims_, "form add");
    if (degree_ != o.degree_ && !o.is_zero() && !is_zero())
        throw error("form add: degree mismatch");
    if (is_zero()) degree_ = o.degree_;
    for (const auto& [i, p] : o.comps_) add_component(i, p);
    return *this;
}

Form& Form::operator-=(const Form& o) { return *this += -o; }

Form Form::operator-() const {
    Form r(dims_, degree_);
    for (const auto& [i, p] : comps_) r.comps_.emplace(i, -p);
    return r;
}

Form& Form::operator*=(const Rational& c) {
    if (c == 0) {
        comps_.clear();
        return *this;
    }
    for (auto& [i, p] : comps_) p *= c;
    return *this;
}

bool Form::operator==(const Form& o) const {
    if (dims_ != o.dims_) return false;
    if (is_zero() && o.is_zero()) return true;
    return degree_ == o.degree_ && comps_ == o.comps_;
}

Form wedge(const Form& a, const Form& b) {
    require_same(a.dims(), b.dims(), "wedge");
    Form r(a.dims(), a.degree() + b.degree());
    IndexList merged;
    for (const auto& [ia, pa] : a.components()) {
        for (const auto& [ib, pb] : b.components()) {
            int sign = merge_indices(ia, ib, merged);
            if (sign == 0) continue;
            Poly p = pa * pb;
            if (sign < 0) p *= Rational(-1);
            r.add_component(merged, p);
        }
    }
    return r;
}

Form mul(const Poly& f, const Form& a) {
    require_same(f.dims(), a.dims(), "scalar * form");
    Form r(a.dims(), a.degree());
    for (const auto& [i, p] : a.components()) r.add_component(i, f * p);
    return r;
}

Form ext_d(const Form& a) {
    Form r(a.dims(), a.degree() + 1);
    IndexList idx;
    for (const auto& [i, p] : a.components()) {
        for (int c = 0; c < a.dims().total(); ++c) {
            Poly dp = p.derivative(c);
            if (dp.is_zero()) continue;
            int sign = insert_index(i, c, idx);
            if (sign == 0) continue;
            if (sign < 0) dp *= Rational(-1);
            r.add_component(idx, dp);
        }
    }
    return r;
}

Form interior(const VectorField& v, const Form& a) {
    require_same(v.dims, a.dims(), "interior product");
    if (a.degree() == 0) return Form::zero(a.dims(), 0);
    Form r(a.dims(), a.degree() - 1);
    for (const auto& [i, p] : a.components()) {
        for (size_t j = 0; j < i.size(); ++j) {
            const Poly& vc = v.comp[i[j]];
            if (vc.is_zero()) continue;
            IndexList rest;
            rest.reserve(i.size() - 1);
            for (size_t l = 0; l < i.size(); ++l)
                if (l != j) rest.push_back(i[l]);
            Poly q = vc * p;
            if (j % 2 == 1) q *= Rational(-1);
            r.add_component(rest, q);
        }
    }
    return r;
}

Form lie_derivative(const VectorField& v, const Form& a) {
    return ext_d(interior(v, a)) + interior(v, ext_d(a));
}

Rational evaluate(const Form& a, const PowerTable& t,
                  const std::vector<std::vector<Rational>>& vecs) {
    if ((int)vecs.size() != a.degree()) throw error("evaluate: expected deg(a) vectors");
    const int k = a.degree();
    Rational total = 0;
    for (const auto& [idx, p] : a.components()) {
        std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) m[r][c] = vecs[c][idx[r]];
        Rational d = det_small(std::move(m));
        if (d == 0) continue;
        total += p.eval(t) * d;
    }
    return total;
}

Rational evaluate(const Form& a, const Point& p, const std::vector<std::vector<Rational>>& vecs) {
    if (p.dims() != a.dims()) throw error("evaluate: point dimension mismatch");
    for (const auto& v : vecs)
        if ((int)v.size() != a.dims().total()) throw error("evaluate: vector dimension mismatch");
    PowerTable t(p, std::max(0, a.coeff_degree()), a.max_abs_freq());
    return evaluate(a, t, vecs);
}

PolyMap PolyMap::identity(SpaceDims d) {
    PolyMap m(d, d);
    for (int i = 0; i < d.lin; ++i) m.set_poly(i, Poly::var(d, i));
    for (int j = 0; j < d.ang; ++j) m.set_angle_identity(d.lin + j, j);
    return m;
}

PolyMap PolyMap::linear(SpaceDims src, SpaceDims dst,
                        const std::vector<std::vector<Rational>>& mat) {
    if (src.ang != 0 || dst.ang != 0) throw error("PolyMap::linear: linear spaces only");
    PolyMap m(src, dst);
    for (int i = 0; i < dst.lin; ++i) {
        Poly p(src);
        for (int j = 0; j < src.lin; ++j)
            if (mat[i][j] != 0) p += Poly::var(src, j) * mat[i][j];
        m.set_poly(i, p);
    }
    return m;
}

void PolyMap::set_poly(int target, const Poly& p) {
    require_same(p.dims(), src_, "PolyMap component");
    comps_[target] = Comp{false, -1, p};
}

void PolyMap::set_angle_identity(int target, int src_angle) {
    if (!dst_.is_angle(target)) throw error("PolyMap: angle identity on linear target");
    if (src_angle < 0 || src_angle >= src_.ang) throw error("PolyMap: bad source angle");
    comps_[target] = Comp{true, src_angle, Poly(src_)};
}

Poly PolyMap::apply_poly(const Poly& p) const {
    require_same(p.dims(), dst_, "PolyMap::apply_poly");
    // Power cache per (target linear coordinate).
    std::vector<std::vector<Poly>> pows(dst_.lin);
    auto power = [&](int coord, int e) -> const Poly& {
        auto& tab = pows[coord];
        if (tab.empty()) tab.push_back(Poly::constant(src_, 1));
        while ((int)tab.size() <= e) {
            const Comp& c = comps_[coord];
            if (c.angle_identity) throw error("PolyMap: linear use of angle target");
            tab.push_back(tab.back() * c.poly);
        }
        return tab[e];
    };
    Poly out(src_);
    for (const auto& [m, c] : p.terms()) {
        Poly term = Poly::constant(src_, c);
        for (int i = 0; i < dst_.lin; ++i)
            if (m.exps[i] != 0) term *= power(i, m.exps[i]);
        if (!m.trig_trivial()) {
            // Angle targets must be angle identities; frequencies transport.
            std::vector<int> freq(src_.ang, 0);
            for (int j = 0; j < dst_.ang; ++j) {
                if (m.freq[j] == 0) continue;
                const Comp& c2 = comps_[dst_.lin + j];
                if (!c2.angle_identity)
                    throw error("PolyMap: angle coordinate without angle-identity component");
                freq[c2.src_angle] += m.freq[j];
            }
            term *= Poly::trig(src_, freq, m.sin_part);
        }
        out += term;
    }
    return out;
}

Form PolyMap::pullback(const Form& a) const {
    require_same(a.dims(), dst_, "pullback");
    // d(phi_i) as 1-forms over the source.
    std::vector<Form> dphi(dst_.total());
    auto dcomp = [&](int i) -> const Form& {
        if (dphi[i].dims().total() == 0 && src_.total() != 0) {
            const Comp& c = comps_[i];
            if (c.angle_identity) {
                dphi[i] = Form::covector(src_, src_.lin + c.src_angle);
            } else {
                Form f(src_, 1);
                for (int s = 0; s < src_.total(); ++s) {
                    Poly d = c.poly.derivative(s);
                    if (!d.is_zero()) f.add_component({s}, d);
                }
                dphi[i] = f;
            }
        }
        return dphi[i];
    };
    Form out(src_, a.degree());
    for (const auto& [idx, p] : a.components()) {
        Form w = Form::from_poly(apply_poly(p));
        for (int i : idx) {
            w = wedge(w, dcomp(i));
            if (w.is_zero()) break;
        }
        if (!w.is_zero()) out += w;
    }
    if (out.is_zero()) return Form::zero(src_, a.degree());
    return out;
}

Point PolyMap::apply_point(const Point& p) const {
    if (p.dims() != src_) throw error("PolyMap::apply_point: dims");
    Point q;
    q.lin.resize(dst_.lin);
    for (int i = 0; i < dst_.lin; ++i) {
        if (comps_[i].angle_identity) throw error("apply_point: angle identity on linear target");
        q.lin[i] = comps_[i].poly.eval(p);
    }
    q.ang.resize(dst_.ang);
    for (int j = 0; j < dst_.ang; ++j) {
        const Comp& c = comps_[dst_.lin + j];
        if (!c.angle_identity) throw error("apply_point: angle target needs angle identity");
        q.ang[j] = p.ang[c.src_angle];
    }
    return q;
}

PolyMap PolyMap::compose_after(const PolyMap& inner) const {
    if (inner.dst_ != src_) throw error("PolyMap compose: dimension mismatch");
    PolyMap out(inner.src_, dst_);
    for (int i = 0; i < dst_.total(); ++i) {
        const Comp& c = comps_[i];
        if (c.angle_identity) {
            const Comp& ic = inner.comps_[src_.lin + c.src_angle];
            if (!ic.angle_identity) throw error("PolyMap compose: angle chain broken");
            out.set_angle_identity(i, ic.src_angle);
        } else {
            out.set_poly(i, inner.apply_poly(c.poly));
        }
    }
    return out;
}

SpaceDims CoordinateRestriction::reduced_dims() const {
    SpaceDims d;
    for (int i = 0; i < src.total(); ++i)
        if (slots[i].keep) (i < src.lin ? d.lin : d.ang) += 1;
    return d;
}

Poly CoordinateRestriction::apply_poly(const Poly& p) const {
    require_same(p.dims(), src, "restriction");
    SpaceDims nd = reduced_dims();
    std::vector<int> lin_map(src.lin, -1), ang_map(src.ang, -1);
    int li = 0, ai = 0;
    for (int i = 0; i < src.lin; ++i)
        if (slots[i].keep) lin_map[i] = li++;
    for (int j = 0; j < src.ang; ++j)
        if (slots[src.lin + j].keep) ang_map[j] = ai++;

    Poly out(nd);
    for (const auto& [m, c] : p.terms()) {
        Rational coeff = c;
        Monomial n{std::vector<int>(nd.lin, 0), std::vector<int>(nd.ang, 0), false};
        bool dead = false;
        for (int i = 0; i < src.lin && !dead; ++i) {
            if (m.exps[i] == 0) continue;
            if (slots[i].keep) {
                n.exps[lin_map[i]] = m.exps[i];
            } else {
                const Rational& v = slots[i].lin_value;
                if (v == 0) {
                    dead = true;
                } else {
                    for (int e = 0; e < m.exps[i]; ++e) coeff *= v;
                }
            }
        }
        if (dead) continue;
        // Split the trig factor into kept and substituted angle parts:
        // trig(sum) expands via the angle-addition formula with the exact
        // (cos, sin) of the substituted combination.
        std::vector<int> kept(nd.ang, 0);
        Rational C = 1, S = 0;
        bool subst_any = false;
        for (int j = 0; j < src.ang; ++j) {
            int k = m.freq[j];
            if (k == 0) continue;
            if (slots[src.lin + j].keep) {
                kept[ang_map[j]] = k;
                continue;
            }
            subst_any = true;
            const CirclePoint& cp = slots[src.lin + j].ang_value;
            Rational ck = 1, sk = 0;  // cos/sin(k * theta_j)
            int ak = k < 0 ? -k : k;
            for (int e = 0; e < ak; ++e) {
                Rational c2 = ck * cp.c - sk * cp.s;
                sk = sk * cp.c + ck * cp.s;
                ck = c2;
            }
            if (k < 0) sk = -sk;
            Rational C2 = C * ck - S * sk;
            S = S * ck + C * sk;
            C = C2;
        }
        if (!subst_any) {
            n.freq = kept;
            n.sin_part = m.sin_part;
            out.add_term(n, coeff);
        } else {
            // cos(K + c) = cos K cos c - sin K sin c, etc.
            n.freq = kept;
            if (!m.sin_part) {
                n.sin_part = false;
                out.add_term(n, coeff * C);
                n.sin_part = true;
                out.add_term(n, -coeff * S);
            } else {
                n.sin_part = true;
                out.add_term(n, coeff * C);
                n.sin_part = false;
                out.add_term(n, coeff * S);
            }
        }
    }
    return out;
}

Form CoordinateRestriction::apply(const Form& a) const {
    require_same(a.dims(), src, "restriction");
    SpaceDims nd = reduced_dims();
    std::vector<int> idx_map(src.total(), -1);
    int li = 0, ai = 0;
    for (int i = 0; i < src.lin; ++i)
        if (slots[i].keep) idx_map[i] = li++;
    for (int j = 0; j < src.ang; ++j)
        if (slots[src.lin + j].keep) idx_map[src.lin + j] = nd.lin + ai++;

    Form out(nd, a.degree());
    for (const auto& [idx, p] : a.components()) {
        IndexList ni;
        bool dead = false;
        for (int i : idx) {
            if (idx_map[i] < 0) {
                dead = true;  // covector of a substituted coordinate dies
                break;
            }
            ni.push_back(idx_map[i]);
        }
        if (dead) continue;
        std::sort(ni.begin(), ni.end());  // order preserved, already sorted
        Poly q = apply_poly(p);
        if (!q.is_zero()) out.add_component(ni, q);
    }
    return out;
}

Form promote(const Form& a, SpaceDims nd, const std::vector<int>& lin_map,
             const std::vector<int>& ang_map) {
    std::vector<int> idx_map(a.dims().total());
    for (int i = 0; i < a.dims().lin; ++i) idx_map[i] = lin_map[i];
    for (int j = 0; j < a.dims().ang; ++j) idx_map[a.dims().lin + j] = nd.lin + ang_map[j];
    Form out(nd, a.degree());
    for (const auto& [idx, p] : a.components()) {
        IndexList ni;
        for (int i : idx) ni.push_back(idx_map[i]);
        std::vector<std::pair<int, int>> order;
        for (size_t i = 0; i < ni.size(); ++i) order.push_back({ni[i], (int)i});
        std::sort(order.begin(), order.end());
        int sign = 1;  // parity of the sorting permutation
        std::vector<int> perm;
        for (auto& [v, orig] : order) perm.push_back(orig);
        for (size_t i = 0; i < perm.size(); ++i)
            for (size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) sign = -sign;
        IndexList sorted;
        for (auto& [v, orig] : order) sorted.push_back(v);
        Poly q = p.remap(nd, lin_map, ang_map);
        if (sign < 0) q *= Rational(-1);
        out.add_component(sorted, q);
    }
    return out;
}

std::string Form::str(const std::vector<std::string>& names) const {
    if (comps_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, p] : comps_) {
        if (!first) os << " + ";
        first = false;
        if (idx.empty()) {
            os << p.str(names);
            continue;
        }
        if (p.is_constant() && p.constant_value() == 1) {
            // bare covector chain
        } else {
            os << "(" << p.str(names) << ")*";
        }
        for (size_t i = 0; i < idx.size(); ++i) {
            if (i) os << "/\\";
            int c = idx[i];
            if (dims_.is_angle(c))
                os << "d" << coord_name(dims_, c, names);
            else
                os << "d" << coord_name(dims_, c, names);
        }
    }
    return os.str();
}

}  // namespace sympq
