#include "enlarge/lp.hpp"

#include "enlarge/error.hpp"

#include <optional>

namespace enlarge {

namespace {

// Rows 0..m-1 hold constraints with the right-hand side in the last column.
// The objective row stores reduced costs of a maximization: entering columns have positive cost.
class Tableau {
public:
    Tableau(Matrix rows, std::vector<std::size_t> basis) : t_(std::move(rows)), basis_(std::move(basis)) {}

    std::size_t rows() const { return basis_.size(); }
    std::size_t vars() const { return t_.cols() - 1; }
    const Rational& rhs(std::size_t r) const { return t_(r, vars()); }
    const std::vector<std::size_t>& basis() const { return basis_; }

    void set_objective(const Vec& cost) {
        cost_ = Vec(vars() + 1);
        for (std::size_t j = 0; j < vars(); ++j) cost_[j] = cost[j];
        for (std::size_t r = 0; r < rows(); ++r) {
            const Rational cb = cost[basis_[r]];
            if (sgn(cb) == 0) continue;
            for (std::size_t j = 0; j <= vars(); ++j) cost_[j] -= cb * t_(r, j);
        }
    }

    // Objective value = -cost_[rhs].
    Rational objective() const { return -cost_[vars()]; }

    // Returns false when unbounded. allowed restricts entering columns.
    bool optimize(const std::vector<bool>& allowed) {
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < vars(); ++j) {
                if (allowed[j] && sgn(cost_[j]) > 0) {
                    enter = j;
                    break;
                }
            }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t r = 0; r < rows(); ++r) {
                if (sgn(t_(r, *enter)) <= 0) continue;
                const Rational ratio = rhs(r) / t_(r, *enter);
                if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const Rational inv = 1 / t_(r, c);
        for (std::size_t j = 0; j <= vars(); ++j) t_(r, j) *= inv;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (i == r || sgn(t_(i, c)) == 0) continue;
            const Rational f = t_(i, c);
            for (std::size_t j = 0; j <= vars(); ++j) t_(i, j) -= f * t_(r, j);
        }
        if (sgn(cost_[c]) != 0) {
            const Rational f = cost_[c];
            for (std::size_t j = 0; j <= vars(); ++j) cost_[j] -= f * t_(r, j);
        }
        basis_[r] = c;
    }

    const Rational& at(std::size_t r, std::size_t c) const { return t_(r, c); }

    void drop_row(std::size_t r) {
        Matrix next(t_.rows() - 1, t_.cols());
        for (std::size_t i = 0, o = 0; i < t_.rows(); ++i) {
            if (i == r) continue;
            for (std::size_t j = 0; j < t_.cols(); ++j) next(o, j) = t_(i, j);
            ++o;
        }
        t_ = std::move(next);
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

private:
    Matrix t_;
    std::vector<std::size_t> basis_;
    Vec cost_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t m = lp.a.rows();
    const std::size_t n0 = lp.a.cols();
    if (lp.b.size() != m || lp.c.size() != n0 || (!lp.free.empty() && lp.free.size() != n0))
        throw Error(ErrorCode::DimensionMismatch, "linear program shape");

    // Free variables are split as x = x+ - x-; the minus parts are appended after the originals.
    std::vector<std::size_t> minus_of(n0, 0);
    std::size_t n = n0;
    for (std::size_t j = 0; j < n0; ++j)
        if (!lp.free.empty() && lp.free[j]) minus_of[j] = n++;
    const std::size_t total = n + m;  // plus one artificial per row

    Matrix rows(m, total + 1);
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        const int sign = sgn(lp.b[r]) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n0; ++j) {
            rows(r, j) = sign * lp.a(r, j);
            if (minus_of[j] != 0) rows(r, minus_of[j]) = -rows(r, j);
        }
        rows(r, n + r) = 1;
        rows(r, total) = sign * lp.b[r];
        basis[r] = n + r;
    }
    Tableau tab(std::move(rows), std::move(basis));

    Vec phase1(total);
    for (std::size_t r = 0; r < m; ++r) phase1[n + r] = -1;
    tab.set_objective(phase1);
    tab.optimize(std::vector<bool>(total, true));
    if (sgn(tab.objective()) < 0) return {LpStatus::Infeasible, {}, {}};

    // Drive artificials out of the basis; rows where that is impossible are redundant.
    for (std::size_t r = 0; r < tab.rows();) {
        if (tab.basis()[r] < n) {
            ++r;
            continue;
        }
        std::optional<std::size_t> col;
        for (std::size_t j = 0; j < n && !col; ++j)
            if (sgn(tab.at(r, j)) != 0) col = j;
        if (col) {
            tab.pivot(r, *col);
            ++r;
        } else {
            tab.drop_row(r);
        }
    }

    Vec phase2(total);
    for (std::size_t j = 0; j < n0; ++j) {
        phase2[j] = lp.c[j];
        if (minus_of[j] != 0) phase2[minus_of[j]] = -lp.c[j];
    }
    tab.set_objective(phase2);
    std::vector<bool> allowed(total, false);
    for (std::size_t j = 0; j < n; ++j) allowed[j] = true;
    if (!tab.optimize(allowed)) return {LpStatus::Unbounded, {}, {}};

    Vec full(total);
    for (std::size_t r = 0; r < tab.rows(); ++r) full[tab.basis()[r]] = tab.rhs(r);
    Vec x(n0);
    for (std::size_t j = 0; j < n0; ++j) {
        x[j] = full[j];
        if (minus_of[j] != 0) x[j] -= full[minus_of[j]];
    }
    return {LpStatus::Optimal, std::move(x), tab.objective()};
}

}  // namespace enlarge
