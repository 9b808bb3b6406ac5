#include "sympq/action.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace sympq {

Form SymplecticSpace::omega() const {
    SpaceDims d = dims();
    Form w(d, 2);
    for (int j = 0; j < n; ++j) w.add_component({2 * j, 2 * j + 1}, Poly::constant(d, 1));
    return w;
}

QMat SymplecticSpace::J() const {
    QMat m(2 * n, QVec(2 * n, Rational(0)));
    for (int j = 0; j < n; ++j) {
        // (x, y) -> (-y, x)
        m[2 * j][2 * j + 1] = -1;
        m[2 * j + 1][2 * j] = 1;
    }
    return m;
}

VectorField ReductionModel::field_of(const DiagonalGen& g) const {
    VectorField v = VectorField::zero(dims);
    for (int j = 0; j < nplanes(); ++j) {
        int w = g.plane_w[j];
        if (w == 0) continue;
        // clockwise: z -> e^{-iwt} z gives xdot = w y, ydot = -w x
        v.comp[planes[j].xc] = Poly::var(dims, planes[j].yc) * Rational(w);
        v.comp[planes[j].yc] = Poly::var(dims, planes[j].xc) * Rational(-w);
    }
    for (int a = 0; a < dims.ang; ++a) {
        if (g.ang_v[a] == 0) continue;
        v.comp[dims.lin + a] = Poly::constant(dims, g.ang_v[a]);
    }
    return v;
}

Poly ReductionModel::plane_radius2(int j) const {
    Poly x = Poly::var(dims, planes[j].xc), y = Poly::var(dims, planes[j].yc);
    return x * x + y * y;
}

long long charge_of(const ComplexWeightData& d, const DiagonalGen& g) {
    long long q = 0;
    for (size_t a = 0; a < d.m.size(); ++a) q += (long long)g.ang_v[a] * d.m[a];
    for (size_t j = 0; j < d.a.size(); ++j)
        q -= (long long)g.plane_w[j] * (d.a[j] - d.b[j] + d.dz[j] - d.dzbar[j]);
    return q;
}

namespace {

bool is_symplectic(const QMat& m) {
    int n2 = (int)m.size();
    // M^T Omega M = Omega with Omega the Gram matrix of sum dx_i /\ dy_i.
    auto omega = [&](int i, int j) -> int {
        if (i / 2 != j / 2) return 0;
        if (i % 2 == 0 && j == i + 1) return 1;
        if (i % 2 == 1 && j == i - 1) return -1;
        return 0;
    };
    for (int a = 0; a < n2; ++a)
        for (int b = 0; b < n2; ++b) {
            Rational s = 0;
            for (int i = 0; i < n2; ++i)
                for (int j = 0; j < n2; ++j)
                    if (omega(i, j) != 0) s += m[i][a] * omega(i, j) * m[j][b];
            if (s != omega(a, b)) return false;
        }
    return true;
}

QMat mat_mul(const QMat& a, const QMat& b) {
    int n = (int)a.size();
    QMat c(n, QVec(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (int j = 0; j < n; ++j)
                if (b[k][j] != 0) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

QMat mat_identity(int n) {
    QMat m(n, QVec(n, Rational(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

PolyMap map_of_matrix(const QMat& m, SpaceDims d) {
    std::vector<std::vector<Rational>> rows(d.lin, std::vector<Rational>(d.lin, Rational(0)));
    for (int i = 0; i < d.lin; ++i)
        for (int j = 0; j < d.lin; ++j) rows[i][j] = m[i][j];
    return PolyMap::linear(d, d, rows);
}

}  // namespace

std::vector<QMat> group_closure(const std::vector<QMat>& gens, int cap) {
    if (gens.empty()) return {};
    int n = (int)gens[0].size();
    std::vector<QMat> elems{mat_identity(n)};
    std::vector<QMat> frontier{mat_identity(n)};
    auto contains = [&](const QMat& m) {
        return std::find(elems.begin(), elems.end(), m) != elems.end();
    };
    while (!frontier.empty()) {
        std::vector<QMat> next;
        for (const auto& f : frontier)
            for (const auto& g : gens) {
                QMat h = mat_mul(g, f);
                if (!contains(h)) {
                    elems.push_back(h);
                    next.push_back(h);
                    if ((int)elems.size() > cap)
                        throw error("finite group closure exceeds cap (" + std::to_string(cap) +
                                    " elements)");
                }
            }
        frontier = std::move(next);
    }
    return elems;
}

void validate(const LinearAction& a) {
    if (a.space.n < 0) throw error("negative half-dimension");
    if (a.is_torus()) {
        const TorusData& t = a.torus();
        if ((int)t.weights.size() != t.rank) throw error("weight matrix row count != rank");
        for (const auto& row : t.weights)
            if ((int)row.size() != a.space.n) throw error("weight matrix column count != n");
        if ((int)a.level.size() != t.rank) throw error("level must have rank entries");
    } else {
        for (const auto& l : a.level)
            if (l != 0) throw error("finite groups admit only level 0");
        for (const auto& g : a.finite().generators) {
            if ((int)g.size() != 2 * a.space.n) throw error("generator size mismatch");
            if (!is_symplectic(g)) throw error("finite generator is not symplectic");
        }
        group_closure(a.finite().generators, a.finite().order_cap);
    }
}

VectorField induced_vector_field(const LinearAction& a, const QVec& xi) {
    if (!a.is_torus()) throw error("induced_vector_field: finite group has no Lie algebra");
    const TorusData& t = a.torus();
    if ((int)xi.size() != t.rank) throw error("induced_vector_field: xi arity");
    SpaceDims d = a.space.dims();
    VectorField v = VectorField::zero(d);
    for (int j = 0; j < a.space.n; ++j) {
        Rational w = 0;
        for (int g = 0; g < t.rank; ++g) w += xi[g] * t.weights[g][j];
        if (w == 0) continue;
        v.comp[2 * j] = Poly::var(d, 2 * j + 1) * w;
        v.comp[2 * j + 1] = Poly::var(d, 2 * j) * (-w);
    }
    return v;
}

MomentMapData moment_map(const LinearAction& a) {
    if (!a.is_torus()) throw error("moment_map: finite group (moment map is trivial)");
    const TorusData& t = a.torus();
    SpaceDims d = a.space.dims();
    MomentMapData out;
    for (int g = 0; g < t.rank; ++g) {
        Poly phi(d);
        for (int j = 0; j < a.space.n; ++j) {
            if (t.weights[g][j] == 0) continue;
            Poly x = Poly::var(d, 2 * j), y = Poly::var(d, 2 * j + 1);
            phi += (x * x + y * y) * Rational(t.weights[g][j], 2);
        }
        phi -= Poly::constant(d, a.level[g]);
        out.components.push_back(std::move(phi));
    }
    return out;
}

MomentReport verify_moment_condition(const LinearAction& a) {
    return verify_moment_condition(a, moment_map(a).components);
}

MomentReport verify_moment_condition(const LinearAction& a, const std::vector<Poly>& phi) {
    MomentReport rep;
    if (!a.is_torus()) throw error("verify_moment_condition: torus actions only");
    Form omega = a.space.omega();
    for (int g = 0; g < a.rank(); ++g) {
        QVec xi(a.rank(), Rational(0));
        xi[g] = 1;
        Form lhs = ext_d(Form::from_poly(phi[g]));
        Form rhs = interior(induced_vector_field(a, xi), omega);
        if (lhs != rhs) {
            rep.ok = false;
            rep.failures.push_back("dPhi != i(xi)omega for basis element " + std::to_string(g));
        }
    }
    return rep;
}

bool is_invariant(const LinearAction& a, const Form& f) {
    if (a.is_torus()) {
        for (int g = 0; g < a.rank(); ++g) {
            QVec xi(a.rank(), Rational(0));
            xi[g] = 1;
            if (!lie_derivative(induced_vector_field(a, xi), f).is_zero()) return false;
        }
        return true;
    }
    SpaceDims d = a.space.dims();
    for (const auto& g : a.finite().generators)
        if (map_of_matrix(g, d).pullback(f) != f) return false;
    return true;
}

Form average(const LinearAction& a, const Form& f) {
    if (a.is_torus()) throw error("average: symbolic averaging over a torus is not supported");
    SpaceDims d = a.space.dims();
    auto elems = group_closure(a.finite().generators, a.finite().order_cap);
    if (elems.empty()) return f;
    Form sum = Form::zero(d, f.degree());
    for (const auto& g : elems) sum += map_of_matrix(g, d).pullback(f);
    sum *= Rational(1, (long)elems.size());
    return sum;
}

std::vector<Poly> zero_fibre_quadrics(const LinearAction& a) {
    if (!a.is_torus()) return {};
    return moment_map(a).components;
}

LinearAction builtin_action(const std::string& name) {
    auto torus = [](int n, std::vector<std::vector<int>> w, QVec level) {
        LinearAction a;
        a.space.n = n;
        a.group = TorusData{(int)w.size(), std::move(w)};
        a.level = std::move(level);
        return a;
    };
    if (name == "cone11") return torus(2, {{1, -1}}, {Rational(0)});
    if (name == "cp1") return torus(2, {{1, 1}}, {Rational(1)});
    if (name == "teardrop") return torus(2, {{1, 2}}, {Rational(1)});
    // zk-cone: Z_k acting on C by an exact rational symplectic matrix of
    // order k; such matrices exist for k in {2,3,4,6}.
    if (name.size() == 7 && name[0] == 'z' && name.substr(2) == "-cone") {
        int k = name[1] - '0';
        QMat g;
        switch (k) {
            case 2: g = {{Rational(-1), Rational(0)}, {Rational(0), Rational(-1)}}; break;
            case 3: g = {{Rational(0), Rational(-1)}, {Rational(1), Rational(-1)}}; break;
            case 4: g = {{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}}; break;
            case 6: g = {{Rational(0), Rational(-1)}, {Rational(1), Rational(1)}}; break;
            default:
                throw error("zk-cone: exact rational model exists only for k in {2,3,4,6}");
        }
        LinearAction a;
        a.space.n = 1;
        a.group = FiniteData{{g}, 10000};
        a.level = {};
        return a;
    }
    throw error("unknown built-in action: " + name);
}

std::vector<std::string> builtin_names() {
    return {"cone11", "cp1", "teardrop", "z2-cone", "z3-cone", "z4-cone", "z6-cone"};
}

ReductionModel builtin_model(const std::string& name) {
    return build_model(builtin_action(name), name);
}

ReductionModel build_model(const LinearAction& a, const std::string& name) {
    validate(a);
    ReductionModel M;
    M.name = name;
    M.dims = a.space.dims();
    for (int j = 0; j < a.space.n; ++j) {
        M.planes.push_back(Plane{2 * j, 2 * j + 1});
        M.coord_names.push_back("x" + std::to_string(j + 1));
        M.coord_names.push_back("y" + std::to_string(j + 1));
    }
    if (a.is_torus()) {
        const TorusData& t = a.torus();
        for (int g = 0; g < t.rank; ++g) {
            DiagonalGen gen{t.weights[g], {}};
            M.torus.push_back(gen);
            M.g_fields.push_back(M.field_of(gen));
        }
        M.moment = moment_map(a).components;
        bool level_zero = true;
        for (const auto& l : a.level)
            if (l != 0) level_zero = false;
        M.graded = level_zero;
        attach_torus_strata(M, t.weights, a.level);
    } else {
        M.finite_gens = a.finite().generators;
        M.finite_elements = group_closure(M.finite_gens, a.finite().order_cap);
        M.graded = true;  // Z = V, a cone
        attach_finite_strata(M);
    }
    return M;
}

StabilizerDescriptor orbit_type(const LinearAction& a, const QVec& point) {
    ReductionModel M = build_model(a);
    Point p;
    p.lin = point;
    return orbit_type(M, p);
}

}  // namespace sympq
