#include "acs/poly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace acs {

namespace {

cplx ipow(cplx x, unsigned n)
{
    cplx r(1.0, 0.0);
    while (n) {
        if (n & 1u)
            r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

void require_same_nvars(const Polynomial& a, const Polynomial& b)
{
    if (a.nvars() != b.nvars())
        throw std::invalid_argument("polynomial variable counts differ: " + std::to_string(a.nvars()) +
                                    " vs " + std::to_string(b.nvars()));
}

// Sorts, merges equal monomials and drops exact zeros.
std::vector<Term> canonicalize(std::vector<Term> terms)
{
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return GrlexLess{}(a.monomial, b.monomial); });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().monomial == t.monomial)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == cplx(0.0, 0.0); });
    return out;
}

} // namespace

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<unsigned> exponents)
    : exps_(std::move(exponents)),
      degree_(std::accumulate(exps_.begin(), exps_.end(), 0u))
{
}

Monomial Monomial::one(std::size_t nvars)
{
    return Monomial(std::vector<unsigned>(nvars, 0u));
}

Monomial Monomial::variable(std::size_t nvars, std::size_t index, unsigned power)
{
    if (index >= nvars)
        throw std::invalid_argument("variable index out of range");
    std::vector<unsigned> e(nvars, 0u);
    e[index] = power;
    return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& other) const
{
    if (nvars() != other.nvars())
        throw std::invalid_argument("monomial variable counts differ");
    std::vector<unsigned> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] += other.exps_[i];
    return Monomial(std::move(e));
}

cplx Monomial::evaluate(std::span<const cplx> x) const
{
    cplx r(1.0, 0.0);
    for (std::size_t i = 0; i < exps_.size(); ++i)
        if (exps_[i])
            r *= ipow(x[i], exps_[i]);
    return r;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const
{
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    const auto& ea = a.exponents();
    const auto& eb = b.exponents();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end(),
                                        [](unsigned p, unsigned q) { return p > q; });
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::size_t nvars, std::vector<Term> terms) : nvars_(nvars)
{
    for (const auto& t : terms)
        if (t.monomial.nvars() != nvars)
            throw std::invalid_argument("term exponent length " + std::to_string(t.monomial.nvars()) +
                                        " does not match nvars " + std::to_string(nvars));
    terms_ = canonicalize(std::move(terms));
}

Polynomial Polynomial::constant(std::size_t nvars, cplx value)
{
    return Polynomial(nvars, {Term{Monomial::one(nvars), value}});
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index)
{
    return Polynomial(nvars, {Term{Monomial::variable(nvars, index), cplx(1.0)}});
}

bool Polynomial::is_real() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.coeff.imag() == 0.0; });
}

unsigned Polynomial::degree() const
{
    // terms are sorted by ascending degree
    return terms_.empty() ? 0u : terms_.back().monomial.degree();
}

cplx Polynomial::coefficient(const Monomial& m) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return GrlexLess{}(t.monomial, key); });
    if (it != terms_.end() && it->monomial == m)
        return it->coeff;
    return {0.0, 0.0};
}

cplx Polynomial::operator()(std::span<const cplx> x) const
{
    if (x.size() != nvars_)
        throw std::invalid_argument("evaluation point has length " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(nvars_));
    cplx sum(0.0, 0.0);
    for (const auto& t : terms_)
        sum += t.coeff * t.monomial.evaluate(x);
    return sum;
}

Polynomial Polynomial::derivative(std::size_t var) const
{
    if (var >= nvars_)
        throw std::invalid_argument("derivative variable out of range");
    std::vector<Term> out;
    for (const auto& t : terms_) {
        unsigned e = t.monomial[var];
        if (e == 0)
            continue;
        std::vector<unsigned> ex = t.monomial.exponents();
        ex[var] = e - 1;
        out.push_back(Term{Monomial(std::move(ex)), t.coeff * static_cast<double>(e)});
    }
    return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const
{
    require_same_nvars(*this, other);
    std::vector<Term> all(terms_);
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    return Polynomial(nvars_, std::move(all));
}

Polynomial Polynomial::operator-() const
{
    Polynomial r(*this);
    for (auto& t : r.terms_)
        t.coeff = -t.coeff;
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const
{
    return *this + (-other);
}

Polynomial Polynomial::operator*(const Polynomial& other) const
{
    require_same_nvars(*this, other);
    std::vector<Term> all;
    all.reserve(terms_.size() * other.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : other.terms_)
            all.push_back(Term{a.monomial * b.monomial, a.coeff * b.coeff});
    return Polynomial(nvars_, std::move(all));
}

Polynomial operator*(cplx s, const Polynomial& p)
{
    std::vector<Term> t(p.terms_);
    for (auto& term : t)
        term.coeff *= s;
    return Polynomial(p.nvars_, std::move(t));
}

Polynomial Polynomial::pow(unsigned k) const
{
    Polynomial r = constant(nvars_, 1.0);
    Polynomial base = *this;
    while (k) {
        if (k & 1u)
            r = r * base;
        k >>= 1;
        if (k)
            base = base * base;
    }
    return r;
}

bool operator==(const Polynomial& a, const Polynomial& b)
{
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size())
        return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

// -------------------------------------------------------------- PolySystem

PolySystem::PolySystem(std::size_t nvars, std::vector<Polynomial> polys)
    : nvars_(nvars), polys_(std::move(polys))
{
    for (const auto& p : polys_)
        if (p.nvars() != nvars_)
            throw std::invalid_argument("system member has " + std::to_string(p.nvars()) +
                                        " variables, expected " + std::to_string(nvars_));
    real_ = std::all_of(polys_.begin(), polys_.end(), [](const Polynomial& p) { return p.is_real(); });
}

std::vector<unsigned> PolySystem::degrees() const
{
    std::vector<unsigned> d;
    d.reserve(polys_.size());
    for (const auto& p : polys_)
        d.push_back(p.degree());
    return d;
}

// -------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::size_t nvars)
    : rows_(rows), cols_(cols), entries_(rows * cols, Polynomial(nvars))
{
}

CMatrix PolyMatrix::evaluate(std::span<const cplx> x) const
{
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(i, j) = (*this)(i, j)(x);
    return m;
}

// -------------------------------------------------------------- operations

CVector evaluate(const PolySystem& sys, std::span<const cplx> point)
{
    if (point.size() != sys.nvars())
        throw std::invalid_argument("evaluation point has length " + std::to_string(point.size()) +
                                    ", system has " + std::to_string(sys.nvars()) + " variables");
    CVector out(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
        out(i) = sys[i](point);
    return out;
}

PolyMatrix jacobian(const PolySystem& sys)
{
    PolyMatrix jac(sys.size(), sys.nvars(), sys.nvars());
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = 0; j < sys.nvars(); ++j)
            jac(i, j) = sys[i].derivative(j);
    return jac;
}

PolySystem compose_linear(const PolySystem& sys, const CMatrix& matrix)
{
    if (static_cast<std::size_t>(matrix.cols()) != sys.size())
        throw std::invalid_argument("matrix has " + std::to_string(matrix.cols()) + " columns, system has " +
                                    std::to_string(sys.size()) + " polynomials");
    std::vector<Polynomial> out;
    out.reserve(matrix.rows());
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        std::vector<Term> all;
        for (std::size_t j = 0; j < sys.size(); ++j) {
            const cplx a = matrix(i, j);
            if (a == cplx(0.0))
                continue;
            for (const auto& t : sys[j].terms())
                all.push_back(Term{t.monomial, a * t.coeff});
        }
        out.emplace_back(sys.nvars(), std::move(all));
    }
    return PolySystem(sys.nvars(), std::move(out));
}

PolySystem substitute(const PolySystem& outer, const PolySystem& inner)
{
    if (outer.nvars() != inner.size())
        throw std::invalid_argument("substitute: outer system has " + std::to_string(outer.nvars()) +
                                    " variables but inner system has " + std::to_string(inner.size()) +
                                    " polynomials");
    const std::size_t n = inner.nvars();
    // power cache: powers[v][e] = inner[v]^e
    std::vector<std::vector<Polynomial>> powers(inner.size());
    auto get_power = [&](std::size_t v, unsigned e) -> const Polynomial& {
        auto& cache = powers[v];
        if (cache.empty())
            cache.push_back(Polynomial::constant(n, 1.0));
        while (cache.size() <= e)
            cache.push_back(cache.back() * inner[v]);
        return cache[e];
    };
    std::vector<Polynomial> out;
    out.reserve(outer.size());
    for (const auto& p : outer) {
        Polynomial acc(n);
        for (const auto& t : p.terms()) {
            Polynomial prod = Polynomial::constant(n, t.coeff);
            for (std::size_t v = 0; v < outer.nvars(); ++v)
                if (t.monomial[v])
                    prod = prod * get_power(v, t.monomial[v]);
            acc += prod;
        }
        out.push_back(std::move(acc));
    }
    return PolySystem(n, std::move(out));
}

PolySystem add_constants(const PolySystem& sys, const CVector& shift)
{
    if (static_cast<std::size_t>(shift.size()) != sys.size())
        throw std::invalid_argument("shift length does not match system size");
    std::vector<Polynomial> out;
    out.reserve(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
        out.push_back(sys[i] + Polynomial::constant(sys.nvars(), shift(i)));
    return PolySystem(sys.nvars(), std::move(out));
}

PolySystem stack(const PolySystem& top, const PolySystem& bottom)
{
    if (top.nvars() != bottom.nvars())
        throw std::invalid_argument("stack: variable counts differ");
    std::vector<Polynomial> all(top.polys());
    all.insert(all.end(), bottom.begin(), bottom.end());
    return PolySystem(top.nvars(), std::move(all));
}

std::size_t veronese_size(std::size_t nvars, unsigned r)
{
    // binomial(nvars + r, r), computed incrementally to stay exact
    std::size_t b = 1;
    for (unsigned k = 1; k <= r; ++k)
        b = b * (nvars + k) / k;
    return b;
}

PolySystem veronese_system(std::size_t nvars, unsigned r)
{
    if (r < 1)
        throw std::invalid_argument("veronese degree must be at least 1");
    std::vector<Monomial> monos;
    std::vector<unsigned> e(nvars, 0u);
    // enumerate exponent vectors of total degree exactly `deg`, x_1 exponent descending
    auto emit = [&](auto&& self, std::size_t var, unsigned remaining) -> void {
        if (var + 1 == nvars) {
            e[var] = remaining;
            monos.emplace_back(e);
            return;
        }
        for (unsigned k = remaining + 1; k-- > 0;) {
            e[var] = k;
            self(self, var + 1, remaining - k);
        }
        e[var] = 0;
    };
    for (unsigned deg = 0; deg <= r; ++deg) {
        if (nvars == 0) {
            if (deg == 0)
                monos.emplace_back(std::vector<unsigned>{});
            continue;
        }
        emit(emit, 0, deg);
    }
    std::vector<Polynomial> polys;
    polys.reserve(monos.size());
    for (auto& m : monos)
        polys.emplace_back(nvars, std::vector<Term>{Term{std::move(m), cplx(1.0)}});
    return PolySystem(nvars, std::move(polys));
}

// ---------------------------------------------------------- SystemEvaluator

SystemEvaluator::SystemEvaluator(const PolySystem& sys)
    : nvars_(sys.nvars()), npolys_(sys.size())
{
    unsigned maxexp = 1;
    std::size_t maxfactors = 1;
    poly_begin_.push_back(0);
    for (const auto& p : sys) {
        for (const auto& t : p.terms()) {
            FlatTerm ft{t.coeff, static_cast<unsigned>(factors_.size()), 0};
            for (std::size_t v = 0; v < nvars_; ++v) {
                if (unsigned e = t.monomial[v]) {
                    factors_.push_back(Factor{static_cast<unsigned>(v), e});
                    ++ft.nfactors;
                    maxexp = std::max(maxexp, e);
                }
            }
            maxfactors = std::max<std::size_t>(maxfactors, ft.nfactors);
            terms_.push_back(ft);
        }
        poly_begin_.push_back(static_cast<unsigned>(terms_.size()));
    }
    stride_ = maxexp + 1;
    powers_.assign(nvars_ * stride_, cplx(1.0));
    prefix_.assign(maxfactors + 1, cplx(1.0));
}

void SystemEvaluator::fill_powers(const CVector& x)
{
    if (static_cast<std::size_t>(x.size()) != nvars_)
        throw std::invalid_argument("evaluation point has wrong length");
    for (std::size_t v = 0; v < nvars_; ++v) {
        cplx* row = &powers_[v * stride_];
        row[0] = 1.0;
        for (std::size_t e = 1; e < stride_; ++e)
            row[e] = row[e - 1] * x(v);
    }
}

void SystemEvaluator::values(const CVector& x, CVector& out)
{
    fill_powers(x);
    out.resize(npolys_);
    for (std::size_t i = 0; i < npolys_; ++i) {
        cplx sum(0.0);
        for (unsigned k = poly_begin_[i]; k < poly_begin_[i + 1]; ++k) {
            const FlatTerm& t = terms_[k];
            cplx v = t.coeff;
            for (unsigned f = 0; f < t.nfactors; ++f) {
                const Factor& fa = factors_[t.first_factor + f];
                v *= power(fa.var, fa.exp);
            }
            sum += v;
        }
        out(i) = sum;
    }
}

void SystemEvaluator::values_and_jacobian(const CVector& x, CVector& out, CMatrix& jac)
{
    out.setZero(npolys_);
    jac.setZero(npolys_, nvars_);
    accumulate(x, cplx(1.0), out, &jac);
}

void SystemEvaluator::accumulate(const CVector& x, cplx alpha, CVector& values, CMatrix* jac)
{
    fill_powers(x);
    for (std::size_t i = 0; i < npolys_; ++i) {
        cplx sum(0.0);
        for (unsigned k = poly_begin_[i]; k < poly_begin_[i + 1]; ++k) {
            const FlatTerm& t = terms_[k];
            const Factor* fs = &factors_[t.first_factor];
            // prefix_[f] = alpha * coeff * prod_{g<f} x_g^{e_g}
            prefix_[0] = alpha * t.coeff;
            for (unsigned f = 0; f < t.nfactors; ++f)
                prefix_[f + 1] = prefix_[f] * power(fs[f].var, fs[f].exp);
            sum += prefix_[t.nfactors];
            if (!jac)
                continue;
            cplx suffix(1.0);
            for (unsigned f = t.nfactors; f-- > 0;) {
                const cplx d = static_cast<double>(fs[f].exp) * power(fs[f].var, fs[f].exp - 1);
                (*jac)(i, fs[f].var) += prefix_[f] * d * suffix;
                suffix *= power(fs[f].var, fs[f].exp);
            }
        }
        values(i) += sum;
    }
}

} // namespace acs
