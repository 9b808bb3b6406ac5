#include <algorithm>
#include <functional>
#include <map>

#include "sympq/action.hpp"

// Invariant-form enumeration. Torus and cyclic invariance are diagonal in
// the complex monomial basis e^{i m.th} z^a zbar^b dz_S dzbar_T (du, dth
// atoms carry no charge beyond their angle speeds), so a basis of the real
// invariant forms is obtained from the real and imaginary parts of the
// charge-zero complex monomials. Finite matrix groups are handled by exact
// averaging of real monomial forms instead.

namespace sympq {

namespace {

struct GF {  // complex-valued form as (re, im) pair of real forms
    Form re, im;
};

GF gf_one(SpaceDims d) { return {Form::from_poly(Poly::constant(d, 1)), Form::zero(d, 0)}; }

GF gf_scale(const GF& f, const Poly& pre, const Poly& pim) {
    return {mul(pre, f.re) - mul(pim, f.im), mul(pre, f.im) + mul(pim, f.re)};
}

GF gf_wedge(const GF& f, const Form& wre, const Form& wim) {
    return {wedge(f.re, wre) - wedge(f.im, wim), wedge(f.re, wim) + wedge(f.im, wre)};
}

// Atom ids: planes contribute dz (2j) and dzbar (2j+1); then bare covectors;
// then angle covectors.
struct AtomTable {
    const ReductionModel& M;
    int nplanes, nbare, nang;
    int count() const { return 2 * nplanes + nbare + nang; }
};

void atom_flags(const AtomTable& at, const std::vector<int>& sector, std::vector<int>& dz,
                std::vector<int>& dzbar, std::vector<int>& bare_sel,
                std::vector<int>& ang_sel) {
    dz.assign(at.nplanes, 0);
    dzbar.assign(at.nplanes, 0);
    bare_sel.clear();
    ang_sel.clear();
    for (int a : sector) {
        if (a < 2 * at.nplanes) {
            if (a % 2 == 0)
                dz[a / 2] = 1;
            else
                dzbar[a / 2] = 1;
        } else if (a < 2 * at.nplanes + at.nbare) {
            bare_sel.push_back(a - 2 * at.nplanes);
        } else {
            ang_sel.push_back(a - 2 * at.nplanes - at.nbare);
        }
    }
}

void enumerate_subsets(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if ((int)cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - (int)cur.size()); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

void enumerate_compositions(int total, int parts, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(parts, 0);
    std::function<void(int, int)> rec = [&](int idx, int rem) {
        if (idx == parts - 1) {
            cur[idx] = rem;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            cur[idx] = v;
            rec(idx + 1, rem - v);
        }
    };
    if (parts == 0) {
        if (total == 0) out.push_back({});
        return;
    }
    rec(0, total);
}

// Indices of a linearly independent subset, preserving order.
std::vector<int> independent_indices(const std::vector<Form>& cands) {
    std::map<std::pair<IndexList, Monomial>, int> cols;
    for (const auto& f : cands)
        for (const auto& [idx, p] : f.components())
            for (const auto& [m, c] : p.terms()) cols.emplace(std::make_pair(idx, m), 0);
    int nc = 0;
    for (auto& [k, v] : cols) v = nc++;
    if (nc == 0) return {};
    RowReducer rr(nc);
    std::vector<int> out;
    for (size_t i = 0; i < cands.size(); ++i) {
        QVec row(nc, Rational(0));
        for (const auto& [idx, p] : cands[i].components())
            for (const auto& [m, c] : p.terms()) row[cols[{idx, m}]] = c;
        if (rr.add_row(row)) out.push_back((int)i);
    }
    return out;
}

std::vector<Form> finite_matrix_basis(const ReductionModel& M, int k, int pmin, int pmax) {
    SpaceDims d = M.dims;
    if (d.ang != 0) throw error("finite matrix actions with angle coordinates are unsupported");
    std::vector<PolyMap> pullbacks;
    for (const auto& g : M.finite_elements) {
        std::vector<std::vector<Rational>> rows(d.lin, std::vector<Rational>(d.lin, Rational(0)));
        for (int i = 0; i < d.lin; ++i)
            for (int j = 0; j < d.lin; ++j) rows[i][j] = g[i][j];
        pullbacks.push_back(PolyMap::linear(d, d, rows));
    }
    std::vector<Form> cands;
    std::vector<std::vector<int>> sectors, comps;
    enumerate_subsets(d.lin, k, sectors);
    for (int p = pmin; p <= pmax; ++p) {
        comps.clear();
        enumerate_compositions(p, d.lin, comps);
        for (const auto& sec : sectors) {
            for (const auto& e : comps) {
                Monomial m{e, {}, false};
                Form f = Form::monomial(d, sec, Poly::monomial(d, m, 1));
                Form avg = Form::zero(d, k);
                for (const auto& pb : pullbacks) avg += pb.pullback(f);
                if (!avg.is_zero()) cands.push_back(avg);
            }
        }
    }
    std::vector<Form> out;
    for (int i : independent_indices(cands)) out.push_back(cands[i]);
    return out;
}

// Conjugation class of the phase-torus multicharge of a complex monomial.
std::vector<int> signature_of(const ComplexWeightData& wd) {
    std::vector<int> sig;
    for (size_t j = 0; j < wd.a.size(); ++j)
        sig.push_back(wd.a[j] - wd.b[j] + wd.dz[j] - wd.dzbar[j]);
    sig.insert(sig.end(), wd.m.begin(), wd.m.end());
    std::vector<int> neg(sig.size());
    for (size_t i = 0; i < sig.size(); ++i) neg[i] = -sig[i];
    return std::max(sig, neg);
}

}  // namespace

std::vector<Form> invariant_basis(const ReductionModel& M, int k, int pmin, int pmax,
                                  std::vector<std::vector<int>>* signatures,
                                  std::vector<FastForm>* fast) {
    if (!M.finite_elements.empty()) {
        auto out = finite_matrix_basis(M, k, pmin, pmax);
        if (signatures) signatures->assign(out.size(), {});
        if (fast) fast->clear();  // fast path unavailable for matrix averages
        return out;
    }
    SpaceDims d = M.dims;
    const int P = M.nplanes(), B = (int)M.bare.size(), A = d.ang;
    AtomTable at{M, P, B, A};
    if (k > at.count()) return {};

    // precompute angle frequency boxes
    int cap = A > 0 ? std::max(M.max_freq_cap, 0) : 0;

    std::vector<std::vector<int>> sectors;
    enumerate_subsets(at.count(), k, sectors);

    std::vector<Form> cands;
    std::vector<std::vector<int>> cand_sigs;
    std::vector<FastMonomial> cand_fast;
    std::vector<int> dz, dzbar, bare_sel, ang_sel;
    for (const auto& sec : sectors) {
        atom_flags(at, sec, dz, dzbar, bare_sel, ang_sel);
        for (int p = pmin; p <= pmax; ++p) {
            std::vector<std::vector<int>> comps;
            enumerate_compositions(p, 2 * P + B, comps);
            for (const auto& e : comps) {
                ComplexWeightData wd;
                wd.a.assign(P, 0);
                wd.b.assign(P, 0);
                for (int j = 0; j < P; ++j) {
                    wd.a[j] = e[2 * j];
                    wd.b[j] = e[2 * j + 1];
                }
                wd.dz = dz;
                wd.dzbar = dzbar;
                wd.m.assign(A, 0);
                // iterate frequency box
                std::vector<int> m(A, -cap);
                while (true) {
                    wd.m = m;
                    bool ok = true;
                    for (const auto& g : M.torus)
                        if (charge_of(wd, g) != 0) ok = false;
                    for (const auto& g : M.basic_charges)
                        if (ok && charge_of(wd, g) != 0) ok = false;
                    if (ok && M.cyclic) {
                        long long q = charge_of(wd, M.cyclic->gen);
                        if (((q % M.cyclic->k) + M.cyclic->k) % M.cyclic->k != 0) ok = false;
                    }
                    if (ok) {
                        // conjugate dedupe: conj swaps (a,b), (dz,dzbar), m -> -m
                        std::vector<int> key, ckey;
                        auto push = [](std::vector<int>& v, const std::vector<int>& x) {
                            v.insert(v.end(), x.begin(), x.end());
                        };
                        push(key, wd.a);
                        push(key, wd.b);
                        push(key, wd.dz);
                        push(key, wd.dzbar);
                        push(key, wd.m);
                        push(ckey, wd.b);
                        push(ckey, wd.a);
                        push(ckey, wd.dzbar);
                        push(ckey, wd.dz);
                        for (int v : wd.m) ckey.push_back(-v);
                        if (!(ckey < key)) {
                            // build the complex monomial form
                            GF gf = gf_one(d);
                            for (int j = 0; j < P; ++j) {
                                Poly x = Poly::var(d, M.planes[j].xc);
                                Poly y = Poly::var(d, M.planes[j].yc);
                                for (int q2 = 0; q2 < wd.a[j]; ++q2) gf = gf_scale(gf, x, y);
                                for (int q2 = 0; q2 < wd.b[j]; ++q2) gf = gf_scale(gf, x, -y);
                            }
                            for (int i = 0; i < B; ++i) {
                                if (e[2 * P + i] == 0) continue;
                                Poly u = Poly::var(d, M.bare[i], e[2 * P + i]);
                                gf = gf_scale(gf, u, Poly::zero(d));
                            }
                            bool mzero = true;
                            for (int v : wd.m)
                                if (v != 0) mzero = false;
                            if (!mzero)
                                gf = gf_scale(gf, Poly::trig(d, wd.m, false),
                                              Poly::trig(d, wd.m, true));
                            // wedge atoms in sector order
                            for (int aid : sec) {
                                if (aid < 2 * P) {
                                    int j = aid / 2;
                                    Form dx = Form::covector(d, M.planes[j].xc);
                                    Form dy = Form::covector(d, M.planes[j].yc);
                                    if (aid % 2 == 1) dy *= Rational(-1);
                                    gf = gf_wedge(gf, dx, dy);
                                } else if (aid < 2 * P + B) {
                                    Form du = Form::covector(d, M.bare[aid - 2 * P]);
                                    gf = gf_wedge(gf, du, Form::zero(d, 1));
                                } else {
                                    Form dth = Form::covector(d, d.lin + (aid - 2 * P - B));
                                    gf = gf_wedge(gf, dth, Form::zero(d, 1));
                                }
                            }
                            FastMonomial fm;
                            fm.wd = wd;
                            fm.bare_exp.assign(B, 0);
                            for (int i = 0; i < B; ++i) fm.bare_exp[i] = e[2 * P + i];
                            fm.atoms = sec;
                            if (!gf.re.is_zero()) {
                                cands.push_back(gf.re);
                                cand_sigs.push_back(signature_of(wd));
                                fm.imaginary_part = false;
                                cand_fast.push_back(fm);
                            }
                            if (!gf.im.is_zero()) {
                                cands.push_back(gf.im);
                                cand_sigs.push_back(signature_of(wd));
                                fm.imaginary_part = true;
                                cand_fast.push_back(fm);
                            }
                        }
                    }
                    // advance frequency box
                    int idx = 0;
                    while (idx < A && m[idx] == cap) m[idx++] = -cap;
                    if (idx == A) break;
                    ++m[idx];
                }
            }
        }
    }
    std::vector<int> keep = independent_indices(cands);
    std::vector<Form> basis;
    std::vector<std::vector<int>> sigs;
    std::vector<FastForm> fasts;
    for (int i : keep) {
        basis.push_back(cands[i]);
        sigs.push_back(cand_sigs[i]);
        fasts.push_back(FastForm{{{Rational(1), cand_fast[i]}}});
    }

    // bundle-quotient horizontality: intersect with ker i(delta) for each
    // basic field, computed per charge class (the contractions preserve the
    // class, so the constraint matrix is block diagonal)
    if (!M.basic_fields.empty() && !basis.empty()) {
        std::map<std::vector<int>, std::vector<int>> groups;
        for (size_t i = 0; i < basis.size(); ++i) groups[sigs[i]].push_back((int)i);
        std::vector<Form> out;
        std::vector<std::vector<int>> out_sigs;
        std::vector<FastForm> out_fast;
        for (const auto& [sig, members] : groups) {
            std::vector<Form> all;
            for (int i : members)
                for (const auto& v : M.basic_fields) all.push_back(interior(v, basis[i]));
            std::map<std::pair<IndexList, Monomial>, int> cols;
            for (const auto& f : all)
                for (const auto& [idx, p] : f.components())
                    for (const auto& [m, c] : p.terms()) cols.emplace(std::make_pair(idx, m), 0);
            int nc = 0;
            for (auto& [kk, v] : cols) v = nc++;
            RowReducer rr((int)members.size());
            if (nc > 0) {
                QMat mat(nc, QVec(members.size(), Rational(0)));
                for (size_t i = 0; i < members.size(); ++i)
                    for (size_t vf = 0; vf < M.basic_fields.size(); ++vf) {
                        const Form& g = all[i * M.basic_fields.size() + vf];
                        for (const auto& [idx, p] : g.components())
                            for (const auto& [m, c] : p.terms()) mat[cols[{idx, m}]][i] += c;
                    }
                for (const auto& row : mat) rr.add_row(row);
            }
            for (const auto& cvec : rr.kernel()) {
                Form f = Form::zero(d, k);
                FastForm ff;
                for (size_t i = 0; i < members.size(); ++i)
                    if (cvec[i] != 0) {
                        f += basis[members[i]] * cvec[i];
                        for (const auto& [c0, fm] : fasts[members[i]].terms)
                            ff.terms.push_back({c0 * cvec[i], fm});
                    }
                out.push_back(f);
                out_sigs.push_back(sig);
                out_fast.push_back(std::move(ff));
            }
        }
        if (signatures) *signatures = out_sigs;
        if (fast) *fast = out_fast;
        return out;
    }
    if (signatures) *signatures = sigs;
    if (fast) *fast = fasts;
    return basis;
}

bool phase_torus_symmetric(const ReductionModel& M) {
    for (int j = 0; j < M.nplanes(); ++j) {
        VectorField rot = VectorField::zero(M.dims);
        rot.comp[M.planes[j].xc] = Poly::var(M.dims, M.planes[j].yc);
        rot.comp[M.planes[j].yc] = -Poly::var(M.dims, M.planes[j].xc);
        for (const auto& q : M.moment)
            if (!lie_derivative(rot, Form::from_poly(q)).is_zero()) return false;
    }
    return true;
}

bool model_invariant(const ReductionModel& M, const Form& f) {
    if (f.is_zero()) return true;
    for (const auto& v : M.g_fields)
        if (!lie_derivative(v, f).is_zero()) return false;
    for (const auto& v : M.basic_fields)
        if (!lie_derivative(v, f).is_zero() || !interior(v, f).is_zero()) return false;
    if (!M.finite_elements.empty()) {
        SpaceDims d = M.dims;
        for (const auto& g : M.finite_gens) {
            std::vector<std::vector<Rational>> rows(d.lin,
                                                    std::vector<Rational>(d.lin, Rational(0)));
            for (int i = 0; i < d.lin; ++i)
                for (int j = 0; j < d.lin; ++j) rows[i][j] = g[i][j];
            if (PolyMap::linear(d, d, rows).pullback(f) != f) return false;
        }
    }
    if (M.cyclic) {
        // span test against the invariant space of the matching block
        ReductionModel probe = M;
        probe.max_freq_cap = std::max(M.max_freq_cap, f.max_abs_freq());
        auto basis = invariant_basis(probe, f.degree(), 0, std::max(0, f.coeff_degree()));
        std::map<std::pair<IndexList, Monomial>, int> cols;
        auto touch = [&](const Form& g) {
            for (const auto& [idx, p] : g.components())
                for (const auto& [m, c] : p.terms()) cols.emplace(std::make_pair(idx, m), 0);
        };
        touch(f);
        for (const auto& b : basis) touch(b);
        int nc = 0;
        for (auto& [k, v] : cols) v = nc++;
        RowReducer rr(nc);
        auto vec = [&](const Form& g) {
            QVec row(nc, Rational(0));
            for (const auto& [idx, p] : g.components())
                for (const auto& [m, c] : p.terms()) row[cols[{idx, m}]] = c;
            return row;
        };
        for (const auto& b : basis) rr.add_row(vec(b));
        if (!rr.in_span(vec(f))) return false;
    }
    return true;
}

int FastMonomial::degree() const {
    int d = 0;
    for (size_t j = 0; j < wd.a.size(); ++j) d += wd.a[j] + wd.b[j];
    for (int e : bare_exp) d += e;
    return d;
}

int FastForm::coeff_degree() const {
    int d = 0;
    for (const auto& [c, m] : terms) d = std::max(d, m.degree());
    return d;
}

int FastForm::max_abs_freq() const {
    int f = 0;
    for (const auto& [c, m] : terms) {
        int s = 0;
        for (int k : m.wd.m) s += k < 0 ? -k : k;
        f = std::max(f, s);
    }
    return f;
}

void CEvalContext::init(const ReductionModel& model, const Point& point, int max_exp,
                        int max_freq) {
    M = &model;
    pt = point;
    zpow.assign(model.nplanes(), {});
    for (int j = 0; j < model.nplanes(); ++j) {
        CRat z{point.lin[model.planes[j].xc], point.lin[model.planes[j].yc]};
        auto& tab = zpow[j];
        tab.resize(max_exp + 1);
        tab[0] = CRat{Rational(1), Rational(0)};
        for (int e = 1; e <= max_exp; ++e) tab[e] = tab[e - 1] * z;
    }
    theta_pow.assign(model.dims.ang, {});
    for (int a = 0; a < model.dims.ang; ++a) {
        CRat u{point.ang[a].c, point.ang[a].s};
        auto& tab = theta_pow[a];
        tab.resize(max_freq + 1);
        tab[0] = CRat{Rational(1), Rational(0)};
        for (int e = 1; e <= max_freq; ++e) tab[e] = tab[e - 1] * u;
    }
    bare_pow.assign(model.bare.size(), {});
    for (size_t i = 0; i < model.bare.size(); ++i) {
        auto& tab = bare_pow[i];
        tab.resize(max_exp + 1);
        tab[0] = 1;
        for (int e = 1; e <= max_exp; ++e) tab[e] = tab[e - 1] * point.lin[model.bare[i]];
    }
}

namespace {

CRat cdet(std::vector<std::vector<CRat>>& m) {
    const size_t k = m.size();
    if (k == 0) return {Rational(1), Rational(0)};
    if (k == 1) return m[0][0];
    if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    CRat det{Rational(1), Rational(0)};
    for (size_t c = 0; c < k; ++c) {
        size_t piv = c;
        while (piv < k && m[piv][c].is_zero()) ++piv;
        if (piv == k) return {Rational(0), Rational(0)};
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = det * CRat{Rational(-1), Rational(0)};
        }
        det = det * m[c][c];
        // inverse of m[c][c]
        Rational n2 = m[c][c].re * m[c][c].re + m[c][c].im * m[c][c].im;
        CRat inv{m[c][c].re / n2, -m[c][c].im / n2};
        for (size_t r = c + 1; r < k; ++r) {
            if (m[r][c].is_zero()) continue;
            CRat f = m[r][c] * inv;
            for (size_t cc = c; cc < k; ++cc) m[r][cc] = m[r][cc] - f * m[c][cc];
        }
    }
    return det;
}

}  // namespace

Rational eval_fast(const FastForm& f, const CEvalContext& ctx,
                   const std::vector<const QVec*>& vecs) {
    const ReductionModel& M = *ctx.M;
    const int P = M.nplanes(), B = (int)M.bare.size();
    Rational total = 0;
    std::vector<std::vector<CRat>> mat;
    for (const auto& [coeff, fm] : f.terms) {
        if ((int)fm.atoms.size() != (int)vecs.size()) throw error("eval_fast: arity mismatch");
        // coefficient: prod z^a * conj(z)^b * e^{i m.th} * bare powers
        CRat val{Rational(1), Rational(0)};
        for (int j = 0; j < P; ++j) {
            if (fm.wd.a[j] > 0) val = val * ctx.zpow[j][fm.wd.a[j]];
            if (fm.wd.b[j] > 0) {
                CRat zb = ctx.zpow[j][fm.wd.b[j]];
                zb.im = -zb.im;
                val = val * zb;
            }
        }
        for (size_t a = 0; a < fm.wd.m.size(); ++a) {
            int k = fm.wd.m[a];
            if (k == 0) continue;
            CRat t = ctx.theta_pow[a][k < 0 ? -k : k];
            if (k < 0) t.im = -t.im;
            val = val * t;
        }
        Rational barefac = 1;
        for (int i = 0; i < B; ++i)
            if (fm.bare_exp[i] > 0) barefac *= ctx.bare_pow[i][fm.bare_exp[i]];
        // covector matrix: rows follow the atom wedge order
        const size_t k = fm.atoms.size();
        mat.assign(k, std::vector<CRat>(k));
        for (size_t r = 0; r < k; ++r) {
            int aid = fm.atoms[r];
            for (size_t c = 0; c < k; ++c) {
                const QVec& v = *vecs[c];
                if (aid < 2 * P) {
                    int j = aid / 2;
                    mat[r][c] = CRat{v[M.planes[j].xc],
                                     aid % 2 == 0 ? v[M.planes[j].yc] : Rational(-v[M.planes[j].yc])};
                } else if (aid < 2 * P + B) {
                    mat[r][c] = CRat{v[M.bare[aid - 2 * P]], Rational(0)};
                } else {
                    mat[r][c] = CRat{v[M.dims.lin + (aid - 2 * P - B)], Rational(0)};
                }
            }
        }
        CRat det = cdet(mat);
        val = val * det;
        total += coeff * barefac * (fm.imaginary_part ? val.im : val.re);
    }
    return total;
}

}  // namespace sympq
