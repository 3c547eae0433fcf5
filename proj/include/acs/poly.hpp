#ifndef ACS_POLY_HPP
#define ACS_POLY_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace acs {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline std::span<const cplx> as_span(const CVector& v)
{
    return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Exponent vector of a monomial x^a = x_1^{a_1} ... x_n^{a_n}.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<unsigned> exponents);
    Monomial(std::initializer_list<unsigned> exponents)
        : Monomial(std::vector<unsigned>(exponents)) {}

    static Monomial one(std::size_t nvars);
    static Monomial variable(std::size_t nvars, std::size_t index, unsigned power = 1);

    std::size_t nvars() const { return exps_.size(); }
    unsigned degree() const { return degree_; }
    unsigned operator[](std::size_t i) const { return exps_[i]; }
    const std::vector<unsigned>& exponents() const { return exps_; }

    Monomial operator*(const Monomial& other) const;
    cplx evaluate(std::span<const cplx> x) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;

private:
    std::vector<unsigned> exps_;
    unsigned degree_ = 0;
};

/// Graded lexicographic order: lower total degree first; within a degree,
/// larger exponent of x_1 first (x_1^2 < x_1 x_2 < x_2^2).
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

struct Term {
    Monomial monomial;
    cplx coeff;
};

/// Sparse multivariate polynomial with complex double coefficients.
///
/// Terms are kept in canonical form: sorted by GrlexLess, merged, and with
/// exactly-zero coefficients removed. No epsilon pruning happens here.
class Polynomial {
public:
    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}
    Polynomial(std::size_t nvars, std::vector<Term> terms);

    static Polynomial constant(std::size_t nvars, cplx value);
    static Polynomial variable(std::size_t nvars, std::size_t index);

    std::size_t nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_real() const;
    /// Total degree; the zero polynomial has degree 0.
    unsigned degree() const;
    /// Coefficient of the given monomial (zero when absent).
    cplx coefficient(const Monomial& m) const;

    /// Term-by-term evaluation.
    cplx operator()(std::span<const cplx> x) const;
    cplx operator()(const CVector& x) const { return (*this)(as_span(x)); }

    Polynomial derivative(std::size_t var) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& other) { return *this = *this + other; }
    Polynomial& operator-=(const Polynomial& other) { return *this = *this - other; }
    Polynomial& operator*=(const Polynomial& other) { return *this = *this * other; }
    friend Polynomial operator*(cplx s, const Polynomial& p);
    Polynomial pow(unsigned k) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);

private:
    std::size_t nvars_;
    std::vector<Term> terms_;
};

/// An ordered list of polynomials sharing one variable count.
class PolySystem {
public:
    PolySystem() = default;
    PolySystem(std::size_t nvars, std::vector<Polynomial> polys);

    std::size_t nvars() const { return nvars_; }
    std::size_t size() const { return polys_.size(); }
    bool empty() const { return polys_.empty(); }
    const Polynomial& operator[](std::size_t i) const { return polys_[i]; }
    const std::vector<Polynomial>& polys() const { return polys_; }
    auto begin() const { return polys_.begin(); }
    auto end() const { return polys_.end(); }

    /// True when every coefficient has an imaginary part of exactly zero.
    bool is_real() const { return real_; }
    std::vector<unsigned> degrees() const;

    friend bool operator==(const PolySystem&, const PolySystem&) = default;

private:
    std::size_t nvars_ = 0;
    std::vector<Polynomial> polys_;
    bool real_ = true;
};

/// k x n grid of polynomials, row-major.
class PolyMatrix {
public:
    PolyMatrix(std::size_t rows, std::size_t cols, std::size_t nvars);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Polynomial& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    CMatrix evaluate(std::span<const cplx> x) const;
    CMatrix evaluate(const CVector& x) const { return evaluate(as_span(x)); }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Polynomial> entries_;
};

/// Throws std::invalid_argument when point.size() != sys.nvars().
CVector evaluate(const PolySystem& sys, std::span<const cplx> point);
inline CVector evaluate(const PolySystem& sys, const CVector& point)
{
    return evaluate(sys, as_span(point));
}

PolyMatrix jacobian(const PolySystem& sys);

/// Returns the system whose i-th polynomial is sum_j matrix(i,j) * sys[j].
PolySystem compose_linear(const PolySystem& sys, const CMatrix& matrix);

/// outer(inner(x)): substitutes the polynomials of `inner` for the
/// variables of `outer`. Requires outer.nvars() == inner.size().
PolySystem substitute(const PolySystem& outer, const PolySystem& inner);

/// Adds a constant to every polynomial: sys[i] + shift[i].
PolySystem add_constants(const PolySystem& sys, const CVector& shift);

/// Concatenates two systems over the same variables.
PolySystem stack(const PolySystem& top, const PolySystem& bottom);

/// All monomials of degree <= r in `nvars` variables, in graded
/// lexicographic order (constant first). Length binomial(nvars + r, r).
PolySystem veronese_system(std::size_t nvars, unsigned r);

/// binomial(nvars + r, r)
std::size_t veronese_size(std::size_t nvars, unsigned r);

/// Flattened evaluator for repeated evaluation of a system and its
/// Jacobian at complex points. Reuses internal buffers, so one instance
/// must not be shared between threads; copies are independent.
class SystemEvaluator {
public:
    explicit SystemEvaluator(const PolySystem& sys);

    std::size_t nvars() const { return nvars_; }
    std::size_t size() const { return npolys_; }

    void values(const CVector& x, CVector& out);
    void values_and_jacobian(const CVector& x, CVector& out, CMatrix& jac);
    /// values += alpha * f(x); jac += alpha * Df(x) when jac is non-null.
    void accumulate(const CVector& x, cplx alpha, CVector& values, CMatrix* jac);

private:
    struct Factor {
        unsigned var;
        unsigned exp;
    };
    struct FlatTerm {
        cplx coeff;
        unsigned first_factor;
        unsigned nfactors;
    };

    void fill_powers(const CVector& x);
    cplx power(unsigned var, unsigned exp) const { return powers_[var * stride_ + exp]; }

    std::size_t nvars_;
    std::size_t npolys_;
    std::size_t stride_;
    std::vector<unsigned> poly_begin_;
    std::vector<FlatTerm> terms_;
    std::vector<Factor> factors_;
    std::vector<cplx> powers_;
    std::vector<cplx> prefix_;
};

} // namespace acs

#endif
