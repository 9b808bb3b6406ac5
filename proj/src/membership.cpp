#include "sympq/membership.hpp"

#include <algorithm>
#include <functional>

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

}  // namespace

ExprProfile profile_of(const Form& f, int nvec) {
    ExprProfile p;
    p.coeff_deg = std::max(0, f.coeff_degree());
    p.maxfreq = f.max_abs_freq();
    p.nvec = nvec;
    p.homogeneous = f.coeff_homogeneous();
    return p;
}

std::vector<long long> grid_sizes(const PatchSampler& ps, const ExprProfile& prof) {
    std::vector<long long> out;
    for (int i = 0; i < ps.nparams(); ++i) {
        long long deg;
        switch (ps.kinds[i]) {
            case ParamKind::Circle:
            case ParamKind::Slope:
                deg = 2LL * (prof.coeff_deg + prof.nvec + prof.maxfreq);
                break;
            case ParamKind::Scale:
                deg = (ps.homogeneous_scale && prof.homogeneous)
                          ? 0
                          : (long long)prof.coeff_deg + prof.nvec;
                break;
            default:
                deg = (long long)prof.coeff_deg + prof.nvec;
        }
        out.push_back(deg + 1);
    }
    return out;
}

GridCursor grid_cursor(const ReductionModel& M, int stratum, const ExprProfile& prof,
                       uint64_t seed) {
    if (stratum < 0 || stratum >= (int)M.strata.size())
        throw error(M.name + ": stratum out of range (empty stratification?)");
    const StratumDef& sd = M.strata[stratum];
    if (!sd.sampler.available())
        throw error(M.name + "/" + sd.id + ": no exact sampler for membership testing");
    GridCursor c;
    c.M = &M;
    c.sd = &sd;
    c.sizes = grid_sizes(sd.sampler, prof);
    c.idx.assign(c.sizes.size(), 0);
    c.node_values.resize(c.sizes.size());
    long long offset = (long long)(seed % 8);
    for (size_t p = 0; p < c.sizes.size(); ++p) {
        long long slot = offset;
        for (long long n = 0; n < c.sizes[p]; ++n) {
            Rational v = sd.sampler.candidate((int)p, slot);
            int guard = 0;
            while (!sd.sampler.valid((int)p, v)) {
                slot += 8;
                v = sd.sampler.candidate((int)p, slot);
                if (++guard > 100000) throw error("sampler: cannot find valid grid node");
            }
            c.node_values[p].push_back(v);
            slot += 8;
        }
    }
    c.done = false;
    return c;
}

void GridCursor::advance() {
    if (sizes.empty()) {
        done = true;
        return;
    }
    size_t p = 0;
    while (p < sizes.size()) {
        if (++idx[p] < sizes[p]) return;
        idx[p] = 0;
        ++p;
    }
    done = true;
}

QVec GridCursor::params() const {
    QVec out(sizes.size());
    for (size_t p = 0; p < sizes.size(); ++p) out[p] = node_values[p][idx[p]];
    return out;
}

bool vanishes_on_stratum(const ReductionModel& M, int stratum, const Form& f, int nvec,
                         const MembershipPolicy& pol, Certificate* cert) {
    const StratumDef& sd = M.strata[stratum];
    ExprProfile prof = profile_of(f, nvec);
    if (cert) {
        cert->degree_bound = prof.coeff_deg;
        cert->exact = true;
        cert->interpolation_complete = true;
    }
    if (f.is_zero()) {
        if (cert) cert->member = true;
        return true;
    }
    GridCursor cur = grid_cursor(M, stratum, prof, pol.seed);
    if (cert) cert->grid = cur.sizes;
    std::vector<std::vector<int>> subs;
    long long evals = 0;
    while (!cur.done) {
        QVec prm = cur.params();
        Point pt = sd.sampler.point(prm);
        std::vector<QVec> frame = sd.sampler.frame(prm);
        subsets_of((int)frame.size(), nvec, subs);
        if (subs.empty()) {
            cur.advance();
            continue;
        }
        PowerTable table(pt, std::max(0, f.coeff_degree()), f.max_abs_freq());
        for (const auto& sub : subs) {
            std::vector<std::vector<Rational>> vecs;
            for (int i : sub) vecs.push_back(frame[i]);
            Rational v = evaluate(f, table, vecs);
            ++evals;
            if (v != 0) {
                if (cert) {
                    cert->evidence.insert(cert->evidence.begin(), EvalEvidence{pt, sub, v});
                    cert->evaluations = evals;
                    cert->member = false;
                }
                return false;
            }
            if (cert && cert->evidence.size() < 3)
                cert->evidence.push_back(EvalEvidence{pt, sub, v});
        }
        cur.advance();
    }
    if (cert) {
        cert->evaluations = evals;
        cert->member = true;
    }
    return true;
}

Certificate is_invariant_cert(const ReductionModel& M, const Form& f) {
    Certificate c;
    c.kind = "invariant";
    c.member = model_invariant(M, f);
    c.interpolation_complete = true;  // symbolic identity, not sampled
    c.detail = c.member ? "exact symbolic invariance" : "Lie derivative or pullback mismatch";
    return c;
}

Certificate is_horizontal_on_principal(const ReductionModel& M, const Form& f,
                                       const MembershipPolicy& pol) {
    Certificate c;
    c.kind = "horizontal-on-principal";
    if (M.principal < 0) throw error(M.name + ": empty principal stratum");
    if (f.degree() == 0 || M.g_fields.empty()) {
        c.member = true;
        c.detail = "no contraction directions";
        return c;
    }
    for (const auto& xi : M.g_fields) {
        Form contracted = interior(xi, f);
        Certificate part;
        bool ok = vanishes_on_stratum(M, M.principal, contracted, f.degree() - 1, pol, &part);
        c.evaluations += part.evaluations;
        c.grid = part.grid;
        c.degree_bound = std::max(c.degree_bound, part.degree_bound);
        if (!ok) {
            c.member = false;
            c.evidence = part.evidence;
            c.detail = "nonzero contraction on principal-stratum tangents";
            return c;
        }
        if (c.evidence.size() < 3)
            c.evidence.insert(c.evidence.end(), part.evidence.begin(), part.evidence.end());
    }
    c.member = true;
    return c;
}

Certificate is_phi_basic(const ReductionModel& M, const Form& f, const MembershipPolicy& pol) {
    Certificate inv = is_invariant_cert(M, f);
    if (!inv.member) {
        inv.kind = "phi-basic";
        inv.detail = "not invariant";
        return inv;
    }
    Certificate hor = is_horizontal_on_principal(M, f, pol);
    hor.kind = "phi-basic";
    return hor;
}

Certificate in_ideal(const ReductionModel& M, const Form& f, const MembershipPolicy& pol) {
    if (!model_invariant(M, f))
        throw error("in_ideal: input is not invariant (the ideal is defined inside invariants)");
    Certificate c;
    c.kind = "ideal";
    if (M.principal < 0) throw error(M.name + ": empty principal stratum");
    bool ok = vanishes_on_stratum(M, M.principal, f, f.degree(), pol, &c);
    c.detail = ok ? "vanishes on principal-stratum tangent multivectors"
                  : "nonzero evaluation on principal-stratum tangents";
    return c;
}

}  // namespace sympq
