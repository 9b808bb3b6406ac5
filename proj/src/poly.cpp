#include "sympq/poly.hpp"

#include <algorithm>
#include <sstream>

namespace sympq {

namespace {

// Canonicalize a (freq, sin?) trig datum in place. Returns the sign picked up
// (0 means the term is identically zero: sin of frequency 0).
int normalize_trig(std::vector<int>& freq, bool& sin_part) {
    int first = 0;
    for (int k : freq)
        if (k != 0) {
            first = k;
            break;
        }
    if (first == 0) return sin_part ? 0 : 1;
    if (first > 0) return 1;
    for (int& k : freq) k = -k;
    return sin_part ? -1 : 1;
}

}  // namespace

PowerTable::PowerTable(const Point& p, int max_exp, int max_freq) {
    lin_.resize(p.lin.size());
    for (size_t i = 0; i < p.lin.size(); ++i) {
        lin_[i].resize(max_exp + 1);
        lin_[i][0] = 1;
        for (int e = 1; e <= max_exp; ++e) lin_[i][e] = lin_[i][e - 1] * p.lin[i];
    }
    ang_.resize(p.ang.size());
    for (size_t j = 0; j < p.ang.size(); ++j) {
        ang_[j].resize(max_freq + 1);
        ang_[j][0] = {1, 0};
        for (int k = 1; k <= max_freq; ++k) {
            const auto& prev = ang_[j][k - 1];
            // (cos,sin)((k)th) from (k-1)th and th via angle addition.
            ang_[j][k] = {prev.first * p.ang[j].c - prev.second * p.ang[j].s,
                          prev.second * p.ang[j].c + prev.first * p.ang[j].s};
        }
    }
}

Poly Poly::constant(SpaceDims d, const Rational& c) {
    Poly p(d);
    Monomial m{std::vector<int>(d.lin, 0), std::vector<int>(d.ang, 0), false};
    p.add_term(m, c);
    return p;
}

Poly Poly::var(SpaceDims d, int lin_coord, int power) {
    if (lin_coord < 0 || lin_coord >= d.lin) throw error("Poly::var: not a linear coordinate");
    Poly p(d);
    Monomial m{std::vector<int>(d.lin, 0), std::vector<int>(d.ang, 0), false};
    m.exps[lin_coord] = power;
    p.add_term(m, 1);
    return p;
}

Poly Poly::trig(SpaceDims d, const std::vector<int>& freq, bool sin_part) {
    if ((int)freq.size() != d.ang) throw error("Poly::trig: frequency arity");
    Poly p(d);
    Monomial m{std::vector<int>(d.lin, 0), freq, sin_part};
    p.add_term(m, 1);
    return p;
}

Poly Poly::monomial(SpaceDims d, Monomial m, const Rational& c) {
    Poly p(d);
    p.add_term(m, c);
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Monomial& m = terms_.begin()->first;
    return m.degree() == 0 && m.trig_trivial();
}

Rational Poly::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw error("Poly::constant_value: not a constant");
    return terms_.begin()->second;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

int Poly::max_abs_freq() const {
    int f = 0;
    for (const auto& [m, c] : terms_) f = std::max(f, m.freq_l1());
    return f;
}

bool Poly::is_homogeneous(int* deg_out) const {
    if (terms_.empty()) {
        if (deg_out) *deg_out = 0;
        return true;
    }
    int d = terms_.begin()->first.degree();
    for (const auto& [m, c] : terms_)
        if (m.degree() != d) return false;
    if (deg_out) *deg_out = d;
    return true;
}

void Poly::add_term(const Monomial& m_in, const Rational& c_in) {
    if (c_in == 0) return;
    Monomial m = m_in;
    Rational c = c_in;
    int s = normalize_trig(m.freq, m.sin_part);
    if (s == 0) return;
    if (s < 0) c = -c;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), std::move(c));
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    require_same(dims_, o.dims_, "poly add");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    require_same(dims_, o.dims_, "poly sub");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly Poly::operator-() const {
    Poly r(dims_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    require_same(a.dims_, b.dims_, "poly mul");
    Poly r(a.dims_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m;
            m.exps.resize(a.dims_.lin);
            for (int i = 0; i < a.dims_.lin; ++i) m.exps[i] = ma.exps[i] + mb.exps[i];
            Rational c = ca * cb;
            if (ma.trig_trivial() && mb.trig_trivial()) {
                m.freq = ma.freq;
                m.sin_part = false;
                r.add_term(m, c);
                continue;
            }
            // Product-to-sum: split into (freq sum, freq difference) halves.
            std::vector<int> fsum(a.dims_.ang), fdif(a.dims_.ang);
            for (int j = 0; j < a.dims_.ang; ++j) {
                fsum[j] = ma.freq[j] + mb.freq[j];
                fdif[j] = ma.freq[j] - mb.freq[j];
            }
            Rational h = c / 2;
            if (!ma.sin_part && !mb.sin_part) {  // cos cos
                m.freq = fdif;
                m.sin_part = false;
                r.add_term(m, h);
                m.freq = fsum;
                r.add_term(m, h);
            } else if (ma.sin_part && mb.sin_part) {  // sin sin
                m.freq = fdif;
                m.sin_part = false;
                r.add_term(m, h);
                m.freq = fsum;
                r.add_term(m, -h);
            } else if (ma.sin_part && !mb.sin_part) {  // sin cos
                m.freq = fsum;
                m.sin_part = true;
                r.add_term(m, h);
                m.freq = fdif;
                r.add_term(m, h);
            } else {  // cos sin
                m.freq = fsum;
                m.sin_part = true;
                r.add_term(m, h);
                m.freq = fdif;
                r.add_term(m, -h);
            }
        }
    }
    return r;
}

Poly Poly::derivative(int coord) const {
    Poly r(dims_);
    if (coord < dims_.lin) {
        for (const auto& [m, c] : terms_) {
            if (m.exps[coord] == 0) continue;
            Monomial n = m;
            n.exps[coord] -= 1;
            r.add_term(n, c * m.exps[coord]);
        }
    } else {
        int j = coord - dims_.lin;
        for (const auto& [m, c] : terms_) {
            if (m.freq[j] == 0) continue;
            Monomial n = m;
            n.sin_part = !m.sin_part;
            // d/dth cos(k.th) = -k_j sin(k.th); d/dth sin(k.th) = k_j cos.
            r.add_term(n, m.sin_part ? Rational(c * m.freq[j]) : Rational(-c * m.freq[j]));
        }
    }
    return r;
}

Rational Poly::eval(const Point& p) const {
    PowerTable t(p, std::max(0, degree()), max_abs_freq());
    return eval(t);
}

Rational Poly::eval(const PowerTable& t) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
        Rational v = c;
        for (int i = 0; i < dims_.lin; ++i)
            if (m.exps[i] != 0) v *= t.lin_pow(i, m.exps[i]);
        if (!m.trig_trivial()) {
            // (C, S) = cos/sin of sum_j freq_j * theta_j via complex product.
            Rational C = 1, S = 0;
            for (int j = 0; j < dims_.ang; ++j) {
                int k = m.freq[j];
                if (k == 0) continue;
                auto [ck, sk] = t.ang_pow(j, k < 0 ? -k : k);
                if (k < 0) sk = -sk;
                Rational C2 = C * ck - S * sk;
                S = S * ck + C * sk;
                C = C2;
            }
            v *= m.sin_part ? S : C;
        }
        total += v;
    }
    return total;
}

double Poly::eval_double(const PointD& p) const {
    double total = 0;
    for (const auto& [m, c] : terms_) {
        double v = (double)c;
        for (int i = 0; i < dims_.lin; ++i)
            for (int e = 0; e < m.exps[i]; ++e) v *= p.lin[i];
        if (!m.trig_trivial()) {
            double phase = 0;
            for (int j = 0; j < dims_.ang; ++j) phase += m.freq[j] * p.ang[j];
            v *= m.sin_part ? std::sin(phase) : std::cos(phase);
        }
        total += v;
    }
    return total;
}

Poly Poly::integrate01(int coord) const {
    if (coord >= dims_.lin) throw error("integrate01: angle coordinate");
    Poly r(dims_);
    for (const auto& [m, c] : terms_) {
        Monomial n = m;
        int e = n.exps[coord];
        n.exps[coord] = 0;
        r.add_term(n, c / (e + 1));
    }
    return r;
}

Poly Poly::remap(SpaceDims nd, const std::vector<int>& lin_map,
                 const std::vector<int>& ang_map) const {
    Poly r(nd);
    for (const auto& [m, c] : terms_) {
        Monomial n{std::vector<int>(nd.lin, 0), std::vector<int>(nd.ang, 0), m.sin_part};
        for (int i = 0; i < dims_.lin; ++i) n.exps[lin_map[i]] = m.exps[i];
        for (int j = 0; j < dims_.ang; ++j) n.freq[ang_map[j]] = m.freq[j];
        r.add_term(n, c);
    }
    return r;
}

std::string coord_name(const SpaceDims& d, int i, const std::vector<std::string>& names) {
    if (i < (int)names.size() && !names[i].empty()) return names[i];
    if (i < d.lin) {
        // Default layout pairs linear coordinates into planes (x1,y1,x2,...).
        return (i % 2 == 0 ? "x" : "y") + std::to_string(i / 2 + 1);
    }
    return "th" + std::to_string(i - d.lin + 1);
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        std::vector<std::string> factors;
        if (a != 1 || (m.degree() == 0 && m.trig_trivial())) factors.push_back(rat_to_string(a));
        for (int i = 0; i < dims_.lin; ++i) {
            if (m.exps[i] == 0) continue;
            std::string f = coord_name(dims_, i, names);
            if (m.exps[i] > 1) f += "^" + std::to_string(m.exps[i]);
            factors.push_back(f);
        }
        if (!m.trig_trivial()) {
            std::ostringstream t;
            t << (m.sin_part ? "sin(" : "cos(");
            bool tf = true;
            for (int j = 0; j < dims_.ang; ++j) {
                int k = m.freq[j];
                if (k == 0) continue;
                if (!tf)
                    t << (k > 0 ? "+" : "-");
                else if (k < 0)
                    t << "-";
                tf = false;
                int ak = k < 0 ? -k : k;
                if (ak != 1) t << ak << "*";
                t << coord_name(dims_, dims_.lin + j, names);
            }
            t << ")";
            factors.push_back(t.str());
        }
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) os << "*";
            os << factors[i];
        }
    }
    return os.str();
}

}  // namespace sympq
