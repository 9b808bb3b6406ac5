#include "sympq/quotient.hpp"

#include "sympq/action.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>

#include "sympq/parallel.hpp"

namespace sympq {

namespace {

void subsets_of(int n, int k, std::vector<std::vector<int>>& out) {
    out.clear();
    if (k > n || k < 0) return;
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

struct CInt {
    Int re, im;
    CInt operator*(const CInt& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    CInt operator-(const CInt& o) const { return {re - o.re, im - o.im}; }
    bool is_zero() const { return re == 0 && im == 0; }
};

// Determinant of a small complex-integer matrix by cofactor expansion.
CInt cint_det(const std::vector<std::vector<CInt>>& m) {
    const size_t k = m.size();
    if (k == 0) return {1, 0};
    if (k == 1) return m[0][0];
    if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    CInt acc{0, 0};
    std::vector<std::vector<CInt>> minor(k - 1, std::vector<CInt>(k - 1));
    for (size_t r = 0; r < k; ++r) {
        if (m[r][0].is_zero()) continue;
        size_t mi = 0;
        for (size_t rr = 0; rr < k; ++rr) {
            if (rr == r) continue;
            for (size_t cc = 1; cc < k; ++cc) minor[mi][cc - 1] = m[rr][cc];
            ++mi;
        }
        CInt term = m[r][0] * cint_det(minor);
        if (r % 2 == 1) term = CInt{0, 0} - term;
        acc.re += term.re;
        acc.im += term.im;
    }
    return acc;
}

// Scale a rational vector to a primitive integer vector (row scaling only
// rescales the membership conditions).
std::vector<Int> integerize(const QVec& v) {
    Int l = 1;
    for (const auto& x : v)
        if (x != 0) l = boost::multiprecision::lcm(l, denominator(x));
    std::vector<Int> out(v.size());
    Int g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = numerator(v[i]) * (l / denominator(v[i]));
        if (out[i] != 0)
            g = g == 0 ? Int(boost::multiprecision::abs(out[i]))
                       : Int(boost::multiprecision::gcd(g, Int(boost::multiprecision::abs(out[i]))));
    }
    if (g > 1)
        for (auto& x : out) x /= g;
    return out;
}

// Rows produced at one grid node, in deterministic (family, subset) order.
// Fast path: coefficients once per basis element, determinants cached per
// (atom set, vector tuple) over integerized frames.
struct NodeRows {
    std::vector<QVec> rows;
};

NodeRows eval_node_rows(const ReductionModel& M, const StratumDef& sd, const QVec& prm,
                        const std::vector<Form>& forms, const std::vector<FastForm>* fast,
                        const std::vector<const VectorField*>& prepend, int q,
                        const ExprProfile& prof,
                        const std::vector<std::vector<int>>& subs) {
    NodeRows out;
    const int N = (int)forms.size();
    Point pt = sd.sampler.point(prm);
    std::vector<QVec> frame = sd.sampler.frame(prm);
    if (subs.empty() || (int)frame.size() < q) return out;
    const bool use_fast = fast && (int)fast->size() == N;
    if (use_fast) {
        CEvalContext ctx;
        ctx.init(M, pt, prof.coeff_deg, prof.maxfreq);
        const int P = M.nplanes(), B = (int)M.bare.size();
        // integerized frame (and field) vectors
        std::vector<std::vector<Int>> iframe;
        for (const auto& v : frame) iframe.push_back(integerize(v));
        // per-term coefficient cache across the basis
        auto coeff_of = [&](const FastMonomial& fm) {
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
                int kk = fm.wd.m[a];
                if (kk == 0) continue;
                CRat t = ctx.theta_pow[a][kk < 0 ? -kk : kk];
                if (kk < 0) t.im = -t.im;
                val = val * t;
            }
            Rational bare = 1;
            for (int i = 0; i < B; ++i)
                if (fm.bare_exp[i] > 0) bare *= ctx.bare_pow[i][fm.bare_exp[i]];
            val.re *= bare;
            val.im *= bare;
            return val;
        };
        std::vector<std::vector<CRat>> coeffs(N);
        for (int i = 0; i < N; ++i)
            for (const auto& [c0, fm] : (*fast)[i].terms) coeffs[i].push_back(coeff_of(fm));

        for (size_t fi = 0; fi < prepend.size(); ++fi) {
            const VectorField* xi = prepend[fi];
            std::vector<Int> ifield;
            if (xi) {
                QVec fv(M.dims.total());
                for (int c = 0; c < M.dims.total(); ++c) fv[c] = xi->comp[c].eval(pt);
                ifield = integerize(fv);
            }
            std::map<std::pair<std::vector<int>, int>, CRat> detcache;
            for (size_t si = 0; si < subs.size(); ++si) {
                std::vector<const std::vector<Int>*> vecs;
                if (xi) vecs.push_back(&ifield);
                for (int i : subs[si]) vecs.push_back(&iframe[i]);
                QVec row(N);
                bool nz = false;
                for (int i = 0; i < N; ++i) {
                    Rational total = 0;
                    for (size_t t = 0; t < (*fast)[i].terms.size(); ++t) {
                        const auto& [c0, fm] = (*fast)[i].terms[t];
                        auto key = std::make_pair(fm.atoms, (int)si);
                        auto it = detcache.find(key);
                        if (it == detcache.end()) {
                            const size_t kk = fm.atoms.size();
                            std::vector<std::vector<CInt>> mat(kk, std::vector<CInt>(kk));
                            for (size_t r = 0; r < kk; ++r) {
                                int aid = fm.atoms[r];
                                for (size_t c = 0; c < kk; ++c) {
                                    const std::vector<Int>& v = *vecs[c];
                                    if (aid < 2 * P) {
                                        int j = aid / 2;
                                        mat[r][c] = CInt{v[M.planes[j].xc],
                                                         aid % 2 == 0 ? v[M.planes[j].yc]
                                                                      : Int(-v[M.planes[j].yc])};
                                    } else if (aid < 2 * P + B) {
                                        mat[r][c] = CInt{v[M.bare[aid - 2 * P]], 0};
                                    } else {
                                        mat[r][c] = CInt{v[M.dims.lin + (aid - 2 * P - B)], 0};
                                    }
                                }
                            }
                            CInt d = cint_det(mat);
                            it = detcache.emplace(key, CRat{Rational(d.re), Rational(d.im)}).first;
                        }
                        const CRat& det = it->second;
                        if (det.is_zero()) continue;
                        const CRat& cf = coeffs[i][t];
                        Rational val = fm.imaginary_part ? cf.re * det.im + cf.im * det.re
                                                         : cf.re * det.re - cf.im * det.im;
                        total += c0 * val;
                    }
                    row[i] = total;
                    if (row[i] != 0) nz = true;
                }
                if (nz) out.rows.push_back(std::move(row));
            }
        }
        return out;
    }
    // real fallback (finite matrix models)
    PowerTable table(pt, prof.coeff_deg, prof.maxfreq);
    for (const auto& xi : prepend) {
        QVec field_val;
        if (xi) {
            field_val.resize(M.dims.total());
            for (int c = 0; c < M.dims.total(); ++c) field_val[c] = xi->comp[c].eval(pt);
        }
        for (const auto& sub : subs) {
            std::vector<QVec> vecs;
            if (xi) vecs.push_back(field_val);
            for (int i : sub) vecs.push_back(frame[i]);
            QVec row(N);
            bool nz = false;
            for (int i = 0; i < N; ++i) {
                row[i] = forms[i].is_zero() ? Rational(0) : evaluate(forms[i], table, vecs);
                if (row[i] != 0) nz = true;
            }
            if (nz) out.rows.push_back(std::move(row));
        }
    }
    return out;
}

// Coefficient vectors c with sum_i c_i (value of basis[i]) = 0 across all
// membership conditions on the principal stratum. Conditions: for each
// prepend field xi, the evaluations f(xi(pt), subset) over q-subsets of the
// tangent frame (equivalently i(xi) f on the subsets); a null prepend tests
// f itself. A streaming pass over the interpolation-complete grid: early
// rows build a candidate kernel until the rank stagnates; each later row is
// checked against the kernel and fed back on failure, so the final kernel is
// orthogonal to the whole grid, certifying vanishing on the patch. Rows are
// consumed in grid order, so parallel and serial runs agree bit for bit.
std::vector<QVec> stratum_kernel(const ReductionModel& M, const std::vector<Form>& forms,
                                 const std::vector<FastForm>* fast,
                                 const std::vector<const VectorField*>& prepend, int q,
                                 const MembershipPolicy& pol) {
    const int N = (int)forms.size();
    if (N == 0) return {};
    const StratumDef& sd = M.principal_stratum();

    ExprProfile prof;
    prof.nvec = q;
    for (const auto& p : prepend)
        if (p) prof.nvec = q + 1;
    prof.homogeneous = true;
    for (const auto& f : forms) {
        prof.coeff_deg = std::max(prof.coeff_deg, std::max(0, f.coeff_degree()));
        prof.maxfreq = std::max(prof.maxfreq, f.max_abs_freq());
        if (!f.coeff_homogeneous()) prof.homogeneous = false;
    }

    // node list
    std::vector<QVec> nodes;
    {
        GridCursor cur = grid_cursor(M, M.principal, prof, pol.seed);
        while (!cur.done) {
            nodes.push_back(cur.params());
            cur.advance();
        }
    }
    std::vector<std::vector<int>> subs;
    {
        QVec prm0 = nodes.empty() ? QVec{} : nodes[0];
        int frame_size = nodes.empty() ? 0 : (int)sd.sampler.frame(prm0).size();
        std::function<void(int, std::vector<int>&)> rec = [&](int start, std::vector<int>& cur2) {
            if ((int)cur2.size() == q) {
                subs.push_back(cur2);
                return;
            }
            for (int i = start; i <= frame_size - (q - (int)cur2.size()); ++i) {
                cur2.push_back(i);
                rec(i + 1, cur2);
                cur2.pop_back();
            }
        };
        std::vector<int> tmp;
        if (q <= frame_size) rec(0, tmp);
    }
    if (subs.empty()) {
        // no multivectors of this arity: conditions are vacuous
        std::vector<QVec> id(N, QVec(N, Rational(0)));
        for (int i = 0; i < N; ++i) id[i][i] = 1;
        return id;
    }

    RowReducer rr(N);
    std::vector<QVec> kern;
    size_t next = 0;
    int idle = 0;
    // Phase A: serial until the rank stagnates.
    while (next < nodes.size()) {
        NodeRows nr = eval_node_rows(M, sd, nodes[next], forms, fast, prepend, q, prof, subs);
        ++next;
        bool moved = false;
        for (auto& row : nr.rows)
            if (rr.add_row(std::move(row))) moved = true;
        idle = moved ? 0 : idle + 1;
        if (rr.rank() == N || idle > pol.stagnation) break;
    }
    kern = rr.kernel();
    if (kern.empty()) return kern;

    // Phase B: remaining nodes in parallel chunks; every row must be
    // orthogonal to the (frozen) kernel, failures feed back in node order.
    const size_t batch = 64;
    while (next < nodes.size()) {
        size_t hi = std::min(nodes.size(), next + batch);
        std::vector<NodeRows> buf(hi - next);
        parallel_for((long long)(hi - next), [&](long long lo2, long long hi2) {
            for (long long i = lo2; i < hi2; ++i)
                buf[i] = eval_node_rows(M, sd, nodes[next + i], forms, fast, prepend, q, prof,
                                        subs);
        });
        for (auto& nr : buf) {
            for (auto& row : nr.rows) {
                bool ortho = true;
                for (const auto& kv : kern)
                    if (dot(row, kv) != 0) {
                        ortho = false;
                        break;
                    }
                if (!ortho) {
                    rr.add_row(std::move(row));
                    kern = rr.kernel();
                    if (kern.empty()) return kern;
                }
            }
        }
        next = hi;
    }
    return kern;
}

std::vector<Form> combos_of(const std::vector<Form>& basis, const std::vector<QVec>& coeffs,
                            SpaceDims dims, int k) {
    std::vector<Form> out;
    for (const auto& c : coeffs) {
        Form f = Form::zero(dims, k);
        for (size_t i = 0; i < basis.size(); ++i)
            if (c[i] != 0) f += basis[i] * c[i];
        out.push_back(std::move(f));
    }
    return out;
}

struct Vectorizer {
    std::map<std::pair<IndexList, Monomial>, int> cols;
    void collect(const Form& f) {
        for (const auto& [idx, p] : f.components())
            for (const auto& [m, c] : p.terms()) cols.emplace(std::make_pair(idx, m), 0);
    }
    void freeze() {
        int n = 0;
        for (auto& [k, v] : cols) v = n++;
    }
    int ncols() const { return (int)cols.size(); }
    QVec vec(const Form& f) const {
        QVec row(cols.size(), Rational(0));
        for (const auto& [idx, p] : f.components())
            for (const auto& [m, c] : p.terms()) row[cols.at({idx, m})] = c;
        return row;
    }
};

struct BlockData {
    int k = 0, pmin = 0, pmax = 0;
    std::vector<int> cls;            // charge-class signature
    std::vector<Form> inv;           // invariant sub-basis of the class
    std::vector<QVec> basic, ideal;  // coefficient vectors over inv
    std::vector<QVec> reps;          // basic vectors completing the ideal
};

// All (coefficient-degree block, charge class) pieces of form degree k.
// The membership conditions commute with the phase torus, so each class is
// an independent kernel problem in its own small coefficient space.
std::vector<BlockData> quotient_blocks(const ReductionModel& M, int k, int D,
                                       const MembershipPolicy& pol) {
    std::vector<BlockData> out;
    if (k > M.dims.total() || k < 0 || D < 0) return out;
    if (M.principal < 0) throw error(M.name + ": empty principal stratum");
    std::vector<std::pair<int, int>> pblocks;
    if (M.graded) {
        for (int p = 0; p <= D; ++p) pblocks.push_back({p, p});
    } else {
        pblocks.push_back({0, D});
    }
    const bool split = phase_torus_symmetric(M);
    for (auto [pmin, pmax] : pblocks) {
        std::vector<std::vector<int>> sigs;
        std::vector<FastForm> fasts;
        std::vector<Form> inv = invariant_basis(M, k, pmin, pmax, &sigs, &fasts);
        if (inv.empty()) continue;
        const bool have_fast = fasts.size() == inv.size();
        std::map<std::vector<int>, std::vector<int>> groups;
        for (size_t i = 0; i < inv.size(); ++i)
            groups[split ? sigs[i] : std::vector<int>{}].push_back((int)i);
        for (const auto& [sig, members] : groups) {
            BlockData b;
            b.k = k;
            b.pmin = pmin;
            b.pmax = pmax;
            b.cls = sig;
            std::vector<FastForm> fsub;
            for (int i : members) {
                b.inv.push_back(inv[i]);
                if (have_fast) fsub.push_back(fasts[i]);
            }
            const std::vector<FastForm>* fptr = have_fast ? &fsub : nullptr;
            if (M.g_fields.empty() || k == 0) {
                b.basic.assign(b.inv.size(), QVec(b.inv.size(), Rational(0)));
                for (size_t i = 0; i < b.inv.size(); ++i) b.basic[i][i] = 1;
            } else {
                std::vector<const VectorField*> prepend;
                for (const auto& xi : M.g_fields) prepend.push_back(&xi);
                b.basic = stratum_kernel(M, b.inv, fptr, prepend, k - 1, pol);
            }
            b.ideal = stratum_kernel(M, b.inv, fptr, {nullptr}, k, pol);
            // the ideal sits inside the basic subspace; complete it
            RowReducer span((int)b.inv.size());
            for (const auto& v : b.ideal) span.add_row(v);
            for (const auto& v : b.basic)
                if (span.add_row(v)) b.reps.push_back(v);
            out.push_back(std::move(b));
        }
    }
    return out;
}

Form coeff_to_form(const BlockData& b, const QVec& c, SpaceDims dims, int k) {
    Form f = Form::zero(dims, k);
    for (size_t i = 0; i < b.inv.size(); ++i)
        if (c[i] != 0) f += b.inv[i] * c[i];
    return f;
}

}  // namespace

QuotientBasis quotient_basis(const ReductionModel& M, int k, int D,
                             const MembershipPolicy& pol) {
    if (D < 0) throw error("quotient_basis: negative truncation");
    QuotientBasis out;
    out.k = k;
    out.D = D;
    if (k > M.dims.total() || k < 0) return out;
    for (const auto& b : quotient_blocks(M, k, D, pol)) {
        for (const auto& c : b.basic) out.basic.push_back(coeff_to_form(b, c, M.dims, k));
        for (const auto& c : b.ideal) out.ideal.push_back(coeff_to_form(b, c, M.dims, k));
        for (const auto& c : b.reps) out.reps.push_back(coeff_to_form(b, c, M.dims, k));
    }
    return out;
}

CohomologyReport cohomology(const ReductionModel& M, int D, const MembershipPolicy& pol) {
    const int N = M.dims.total();
    CohomologyReport rep;
    rep.D = D;
    rep.truncation_note = "form degree k paired with coefficient degree <= D - k";
    std::vector<std::vector<BlockData>> Q(N + 2);
    for (int k = 0; k <= N; ++k)
        if (D - k >= 0) Q[k] = quotient_blocks(M, k, D - k, pol);

    rep.dim.assign(N + 1, 0);
    rep.rank_d.assign(N + 1, 0);
    rep.betti.assign(N + 1, 0);
    for (int k = 0; k <= N; ++k)
        for (const auto& b : Q[k]) rep.dim[k] += (int)b.reps.size();

    // d preserves the charge class and lowers the coefficient degree by one,
    // so ranks assemble block by block.
    for (int k = 0; k < N; ++k) {
        for (const auto& b : Q[k]) {
            if (b.reps.empty()) continue;
            // locate the target block
            const BlockData* tgt = nullptr;
            for (const auto& t : Q[k + 1]) {
                bool pmatch = M.graded ? t.pmin == b.pmin - 1 : true;
                if (pmatch && t.cls == b.cls) tgt = &t;
            }
            std::vector<Form> dr_forms;
            for (const auto& c : b.reps)
                dr_forms.push_back(ext_d(coeff_to_form(b, c, M.dims, k)));
            bool all_zero = true;
            for (const auto& f : dr_forms)
                if (!f.is_zero()) all_zero = false;
            if (all_zero) continue;
            if (!tgt) throw error("cohomology: d image misses every target block (internal)");
            // expand dr over the target invariant sub-basis
            Vectorizer vz;
            for (const auto& f : tgt->inv) vz.collect(f);
            for (const auto& f : dr_forms) vz.collect(f);
            vz.freeze();
            SpanSolver inv_span(vz.ncols());
            for (const auto& f : tgt->inv) inv_span.add(vz.vec(f));
            // quotient coordinates: coefficients within (ideal | reps)
            SpanSolver coord((int)tgt->inv.size());
            for (const auto& v : tgt->ideal) coord.add(v);
            int first_rep = (int)tgt->ideal.size();
            for (const auto& v : tgt->reps) coord.add(v);
            RowReducer rk((int)tgt->reps.size());
            for (const auto& f : dr_forms) {
                auto ic = inv_span.solve(vz.vec(f));
                if (!ic) throw error("cohomology: d left the invariant span (internal)");
                QVec as_coeff(tgt->inv.size());
                for (size_t i = 0; i < tgt->inv.size(); ++i) as_coeff[i] = (*ic)[i];
                auto qc = coord.solve(as_coeff);
                if (!qc) throw error("cohomology: d of a basic form left the basic span (internal)");
                QVec row(tgt->reps.size());
                for (size_t i = 0; i < tgt->reps.size(); ++i) row[i] = (*qc)[first_rep + i];
                rk.add_row(std::move(row));
            }
            rep.rank_d[k] += rk.rank();
        }
    }
    for (int k = 0; k <= N; ++k) {
        int below = k > 0 ? rep.rank_d[k - 1] : 0;
        rep.betti[k] = rep.dim[k] - rep.rank_d[k] - below;
    }
    return rep;
}

QuotientFormClass differential(const ReductionModel& M, const QuotientFormClass& c, bool check,
                               const MembershipPolicy& pol) {
    QuotientFormClass out;
    out.representative = ext_d(c.representative);
    out.k = c.k + 1;
    out.D = c.D;
    if (check) {
        Certificate cert = is_phi_basic(M, out.representative, pol);
        if (!cert.member) throw error("differential: output failed the basic test");
    }
    return out;
}

StratumRestriction restrict_to_stratum(const ReductionModel& M, const Form& rep, int stratum,
                                       int nsamples, uint64_t seed) {
    StratumRestriction out;
    out.stratum = stratum;
    auto samples = sample_points(M, stratum, nsamples, seed);
    std::vector<std::vector<int>> subs;
    for (const auto& s : samples) {
        StratumRestriction::Row row;
        row.point = s.point;
        subsets_of((int)s.tangent.size(), rep.degree(), subs);
        for (const auto& sub : subs) {
            std::vector<std::vector<Rational>> vecs;
            for (int i : sub) vecs.push_back(s.tangent[i]);
            Rational v = evaluate(rep, s.point, vecs);
            if (v != 0) out.all_zero = false;
            row.values.push_back(v);
        }
        // contraction with each induced field vanishes on stratum tangents
        for (const auto& xi : M.g_fields) {
            Form con = interior(xi, rep);
            if (con.is_zero()) continue;
            std::vector<std::vector<int>> csubs;
            subsets_of((int)s.tangent.size(), con.degree(), csubs);
            for (const auto& sub : csubs) {
                std::vector<std::vector<Rational>> vecs;
                for (int i : sub) vecs.push_back(s.tangent[i]);
                if (evaluate(con, s.point, vecs) != 0) out.contractions_vanish = false;
            }
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

Form random_combination(const std::vector<Form>& basis, std::mt19937_64& rng, int max_coeff) {
    if (basis.empty()) throw error("random_combination: empty basis");
    std::uniform_int_distribution<int> c(-max_coeff, max_coeff);
    Form f = Form::zero(basis[0].dims(), basis[0].degree());
    bool nz = false;
    for (const auto& b : basis) {
        int v = c(rng);
        if (v != 0) {
            f += b * Rational(v);
            nz = true;
        }
    }
    if (!nz) f += basis[rng() % basis.size()] * Rational(1);
    return f;
}

}  // namespace sympq
