#include "enlarge/oracle.hpp"

#include "enlarge/error.hpp"

#include <optional>

namespace enlarge::oracle {

namespace {

// Dense simplex over rationals, written independently of the main solver. Pivots by largest
// reduced cost and falls back to Bland's rule after a run of degenerate pivots.
struct Simplex {
    std::vector<Vec> rows;  // m rows of width n + 1, last entry is the right-hand side
    Vec obj;                // width n + 1, reduced costs, last entry is -objective
    std::vector<std::size_t> basic;
    std::size_t n = 0;

    void pivot(std::size_t r, std::size_t c) {
        Vec& pr = rows[r];
        const Rational inv = 1 / pr[c];
        for (auto& v : pr) v *= inv;
        auto eliminate = [&](Vec& row) {
            if (sgn(row[c]) == 0) return;
            const Rational f = row[c];
            for (std::size_t j = 0; j <= n; ++j) row[j] -= f * pr[j];
        };
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r) eliminate(rows[i]);
        eliminate(obj);
        basic[r] = c;
    }

    // false when unbounded
    bool run(std::size_t usable) {
        bool bland = false;
        int degenerate = 0;
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < usable; ++j) {
                if (sgn(obj[j]) <= 0) continue;
                if (!enter) enter = j;
                if (bland) break;
                if (obj[j] > obj[*enter]) enter = j;
            }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (sgn(rows[i][*enter]) <= 0) continue;
                Rational ratio = rows[i][n] / rows[i][*enter];
                if (!leave || ratio < best || (ratio == best && basic[i] < basic[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return false;
            if (sgn(best) == 0) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
            }
            pivot(*leave, *enter);
        }
    }

    void price(const Vec& cost) {
        obj.assign(n + 1, Rational(0));
        for (std::size_t j = 0; j < cost.size(); ++j) obj[j] = cost[j];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Rational cb = basic[i] < cost.size() ? cost[basic[i]] : Rational(0);
            if (sgn(cb) == 0) continue;
            for (std::size_t j = 0; j <= n; ++j) obj[j] -= cb * rows[i][j];
        }
    }
};

// maximize c^T x, A x = b, x >= 0. Returns nullopt when infeasible; unboundedness is a caller bug here.
std::optional<Vec> maximize(const Matrix& a, const Vec& b, const Vec& c) {
    const std::size_t m = a.rows();
    const std::size_t nv = a.cols();
    Simplex sx;
    sx.n = nv + m;
    sx.rows.assign(m, Vec(sx.n + 1));
    sx.basic.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const bool flip = sgn(b[i]) < 0;
        for (std::size_t j = 0; j < nv; ++j) sx.rows[i][j] = flip ? Rational(-a(i, j)) : a(i, j);
        sx.rows[i][nv + i] = 1;
        sx.rows[i][sx.n] = flip ? Rational(-b[i]) : b[i];
        sx.basic[i] = nv + i;
    }
    Vec aux(sx.n);
    for (std::size_t i = 0; i < m; ++i) aux[nv + i] = -1;
    sx.price(aux);
    sx.run(sx.n);
    if (sgn(sx.obj[sx.n]) != 0) return std::nullopt;  // artificial mass left over
    for (std::size_t i = 0; i < sx.rows.size();) {
        if (sx.basic[i] < nv) {
            ++i;
            continue;
        }
        std::optional<std::size_t> col;
        for (std::size_t j = 0; j < nv && !col; ++j)
            if (sgn(sx.rows[i][j]) != 0) col = j;
        if (col) {
            sx.pivot(i, *col);
            ++i;
        } else {
            sx.rows.erase(sx.rows.begin() + static_cast<std::ptrdiff_t>(i));
            sx.basic.erase(sx.basic.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    sx.price(c);
    if (!sx.run(nv)) throw Error(ErrorCode::Unsolvable, "oracle program unbounded");
    Vec x(nv);
    for (std::size_t i = 0; i < sx.rows.size(); ++i)
        if (sx.basic[i] < nv) x[sx.basic[i]] = sx.rows[i][sx.n];
    return x;
}

struct Layout {
    std::vector<std::size_t> offset;  // first node of each tick
    std::size_t size = 0;
};

Layout layout_of(const Filtration& filt) {
    Layout l;
    for (int k = 0; k <= filt.ticks(); ++k) {
        l.offset.push_back(l.size);
        l.size += filt.at(k).num_blocks();
    }
    return l;
}

Rational mass(const SampleSpace& space, const Block& b) {
    Rational m(0);
    for (Outcome w : b) m += space.prob(w);
    return m;
}

}  // namespace

DeflatorSystem build_deflator_system(const SampleSpace& space, const Filtration& filt, const Process& s,
                                     const StoppingTime& horizon) {
    if (s.outcomes() != space.size() || s.ticks() != filt.ticks())
        throw Error(ErrorCode::DimensionMismatch, "asset does not live on this basis");
    if (!is_stopping_time(filt, horizon)) throw Error(ErrorCode::NotAStoppingTime, "horizon is not a stopping time");
    const Layout lay = layout_of(filt);
    DeflatorSystem sys;
    for (int k = 0; k <= filt.ticks(); ++k)
        for (std::size_t c = 0; c < filt.at(k).num_blocks(); ++c) sys.nodes.push_back({k, c});

    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t c = 0; c < filt.at(0).num_blocks(); ++c) {
        Vec row(lay.size);
        row[lay.offset[0] + c] = 1;
        rows.push_back(std::move(row));
        rhs.push_back(1);
    }
    for (int k = 1; k <= filt.ticks(); ++k) {
        const Partition& pre = filt.pre(k);
        const Partition& at = filt.at(k);
        const Partition& last = filt.at(k - 1);
        for (const Block& b : pre.blocks()) {
            const std::size_t parent = lay.offset[static_cast<std::size_t>(k - 1)] + last.block_of(b.front());
            std::vector<std::size_t> kids;
            for (std::size_t c = 0; c < at.num_blocks(); ++c)
                if (pre.block_of(at.block(c).front()) == pre.block_of(b.front())) kids.push_back(c);
            if (horizon(b.front()) < k) {
                for (std::size_t c : kids) {
                    Vec row(lay.size);
                    row[lay.offset[static_cast<std::size_t>(k)] + c] = 1;
                    row[parent] -= 1;
                    rows.push_back(std::move(row));
                    rhs.push_back(0);
                }
                continue;
            }
            const Rational pb = mass(space, b);
            Vec row(lay.size);
            for (std::size_t c : kids) row[lay.offset[static_cast<std::size_t>(k)] + c] = mass(space, at.block(c));
            row[parent] -= pb;
            rows.push_back(std::move(row));
            rhs.push_back(0);
            for (std::size_t i = 0; i < s.dim(); ++i) {
                Vec srow(lay.size);
                for (std::size_t c : kids) {
                    const Outcome w = at.block(c).front();
                    srow[lay.offset[static_cast<std::size_t>(k)] + c] = mass(space, at.block(c)) * s(w, k, i);
                }
                srow[parent] -= pb * s(b.front(), k - 1, i);
                rows.push_back(std::move(srow));
                rhs.push_back(0);
            }
        }
    }
    sys.a = Matrix(rows.size(), lay.size);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t j = 0; j < lay.size; ++j) sys.a(r, j) = rows[r][j];
    sys.b = std::move(rhs);
    return sys;
}

OracleResult lp_deflator_oracle(const SampleSpace& space, const Filtration& filt, const Process& s,
                                const StoppingTime& horizon) {
    const DeflatorSystem sys = build_deflator_system(space, filt, s, horizon);
    const std::size_t m = sys.a.rows();
    const std::size_t n = sys.a.cols();

    // Gap program over (z, t, slack): A z = b, z_j - t - slack_j = 0, maximize t.
    {
        Matrix a(m + n, 2 * n + 1);
        Vec b(m + n);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t j = 0; j < n; ++j) a(r, j) = sys.a(r, j);
            b[r] = sys.b[r];
        }
        for (std::size_t j = 0; j < n; ++j) {
            a(m + j, j) = 1;
            a(m + j, n) = -1;
            a(m + j, n + 1 + j) = -1;
        }
        Vec c(2 * n + 1);
        c[n] = 1;
        const auto x = maximize(a, b, c);
        if (x && sgn((*x)[n]) > 0) {
            Process z(space.size(), filt.ticks(), 1);
            const Layout lay = layout_of(filt);
            for (Outcome w = 0; w < space.size(); ++w)
                for (int k = 0; k <= filt.ticks(); ++k)
                    z(w, k) = (*x)[lay.offset[static_cast<std::size_t>(k)] + filt.at(k).block_of(w)];
            return {true, std::move(z), {}};
        }
    }

    // Alternative over (y+, y-, u, r): A^T y - u = 0, -b^T y - r = 0, sum u + r = 1.
    Matrix a(n + 2, 2 * m + n + 1);
    Vec b(n + 2);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            a(j, i) = sys.a(i, j);
            a(j, m + i) = -sys.a(i, j);
        }
        a(j, 2 * m + j) = -1;
    }
    for (std::size_t i = 0; i < m; ++i) {
        a(n, i) = -sys.b[i];
        a(n, m + i) = sys.b[i];
    }
    a(n, 2 * m + n) = -1;
    for (std::size_t j = 0; j <= n; ++j) a(n + 1, 2 * m + j) = 1;
    b[n + 1] = 1;
    const auto x = maximize(a, b, Vec(2 * m + n + 1));
    if (!x) throw Error(ErrorCode::Unsolvable, "oracle found neither a deflator nor a certificate");
    Vec y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = (*x)[i] - (*x)[m + i];
    return {false, std::nullopt, std::move(y)};
}

bool verify_certificate(const SampleSpace& space, const Filtration& filt, const Process& s, const StoppingTime& horizon,
                        const Vec& certificate) {
    const DeflatorSystem sys = build_deflator_system(space, filt, s, horizon);
    if (certificate.size() != sys.a.rows()) return false;
    Rational total(0);
    for (std::size_t j = 0; j < sys.a.cols(); ++j) {
        Rational col(0);
        for (std::size_t i = 0; i < sys.a.rows(); ++i) col += sys.a(i, j) * certificate[i];
        if (sgn(col) < 0) return false;
        total += col;
    }
    Rational by(0);
    for (std::size_t i = 0; i < sys.b.size(); ++i) by += sys.b[i] * certificate[i];
    if (sgn(by) > 0) return false;
    return total - by == 1;
}

bool check_deflator(const SampleSpace& space, const Filtration& filt, const Process& s, const StoppingTime& horizon,
                    const Process& z) {
    if (z.outcomes() != space.size() || z.ticks() != filt.ticks() || z.dim() != 1) return false;
    for (Outcome w = 0; w < space.size(); ++w) {
        if (z(w, 0) != 1) return false;
        for (int k = 0; k <= filt.ticks(); ++k)
            if (sgn(z(w, k)) <= 0) return false;
    }
    for (int k = 0; k <= filt.ticks(); ++k)
        for (const Block& b : filt.at(k).blocks())
            for (Outcome w : b)
                if (z(w, k) != z(b.front(), k)) return false;
    for (int k = 1; k <= filt.ticks(); ++k) {
        for (const Block& b : filt.pre(k).blocks()) {
            const Outcome w0 = b.front();
            if (horizon(w0) < k) {
                for (Outcome w : b)
                    if (z(w, k) != z(w, k - 1)) return false;
                continue;
            }
            Rational pb(0);
            Rational ez(0);
            for (Outcome w : b) {
                pb += space.prob(w);
                ez += space.prob(w) * z(w, k);
            }
            if (ez != pb * z(w0, k - 1)) return false;
            for (std::size_t i = 0; i < s.dim(); ++i) {
                Rational ezs(0);
                for (Outcome w : b) ezs += space.prob(w) * z(w, k) * s(w, k, i);
                if (ezs != pb * z(w0, k - 1) * s(w0, k - 1, i)) return false;
            }
        }
    }
    return true;
}

}  // namespace enlarge::oracle
