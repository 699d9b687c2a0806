#include "lakit/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace lakit {

Poly Poly::constant(std::size_t nvars, const Rational& c) {
    Poly p(nvars);
    if (c != 0) p.terms_[Exponents(nvars, 0u)] = c;
    return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw std::invalid_argument("Poly::variable: index out of range");
    Exponents e(nvars, 0u);
    e[i] = 1;
    return monomial(nvars, std::move(e), 1);
}

Poly Poly::monomial(std::size_t nvars, Exponents exps, const Rational& c) {
    if (exps.size() != nvars) throw std::invalid_argument("Poly::monomial: exponent size mismatch");
    Poly p(nvars);
    if (c != 0) p.terms_[std::move(exps)] = c;
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == Exponents(nvars_, 0u);
}

Rational Poly::constant_value() const {
    auto it = terms_.find(Exponents(nvars_, 0u));
    return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Poly::total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned t = 0;
        for (unsigned k : e) t += k;
        if (t > d) d = t;
    }
    return d;
}

void Poly::check_compatible(const Poly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("Poly: mixing different variable counts");
}

void Poly::add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    a.check_compatible(b);
    Poly r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            Exponents e(a.nvars_);
            for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly operator*(const Rational& c, Poly p) {
    if (c == 0) return Poly(p.nvars());
    for (auto& [e, v] : p.terms_) v *= c;
    return p;
}

Poly Poly::derivative(std::size_t var) const {
    if (var >= nvars_) throw std::invalid_argument("Poly::derivative: index out of range");
    Poly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        r.add_term(d, c * e[var]);
    }
    return r;
}

Rational Poly::eval(const std::vector<Rational>& point) const {
    if (point.size() != nvars_) throw std::invalid_argument("Poly::eval: point size mismatch");
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
        Rational m = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) m *= point[i];
        acc += m;
    }
    return acc;
}

Poly Poly::compose(const std::vector<Poly>& images) const {
    if (images.size() != nvars_) throw std::invalid_argument("Poly::compose: image count mismatch");
    std::size_t target = images.empty() ? 0 : images[0].nvars();
    Poly acc(target);
    for (const auto& [e, c] : terms_) {
        Poly m = Poly::constant(target, c);
        for (std::size_t i = 0; i < nvars_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) m = m * images[i];
        acc += m;
    }
    return acc;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool has_vars = false;
        for (unsigned k : e)
            if (k) has_vars = true;
        if (!has_vars || a != 1) os << a.str();
        bool lead = !has_vars || a != 1;
        for (std::size_t i = 0; i < nvars_; ++i) {
            if (!e[i]) continue;
            if (lead) os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            lead = true;
        }
    }
    return os.str();
}

} // namespace lakit
