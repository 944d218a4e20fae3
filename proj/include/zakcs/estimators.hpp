// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit
//
// Greedy sparse recovery over the atom dictionary: orthogonal matching
// pursuit, binary-division refinement of a selected cell, and the combined
// pursuit that refines every selection to continuous delay/Doppler values.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "zakcs/dictionary.hpp"

namespace zakcs {

/// Residual-energy stopping threshold (xi) plus an iteration cap.
struct StoppingRule {
    double xi = 0.0;
    int max_iter = 1;

    StoppingRule(double xi_, int max_iter_) : xi(xi_), max_iter(max_iter_) {
        if (!(xi >= 0.0)) throw std::invalid_argument("StoppingRule: xi must be >= 0");
        if (max_iter < 1) throw std::invalid_argument("StoppingRule: max_iter must be >= 1");
    }
};

struct EstimatedPath {
    double tau = 0.0;
    double nu = 0.0;
    cdouble gain{0.0, 0.0};
};

/// Operation counters surfaced for the benchmark harness.
///   corr_products       complex MACs spent on dictionary correlations,
///                       K*L per pursuit iteration
///   bank_build_products complex MACs spent building the bank (0 on cache hit),
///                       K*L^2 when cold
///   atom_evals          number of single-atom phi(tau, nu) evaluations
///   refine_atom_evals   the subset performed by BR corner probing,
///                       exactly 4*n_ref per refined iteration
struct OpCounters {
    uint64_t corr_products = 0;
    uint64_t bank_build_products = 0;
    uint64_t atom_evals = 0;
    uint64_t refine_atom_evals = 0;
    bool cache_hit = false;
};

struct SparseEstimate {
    std::vector<EstimatedPath> entries;
    std::vector<double> residual_history;  // ||r||^2 after each completed iteration
    double residual_norm2 = 0.0;
    int iterations = 0;
    bool degenerate = false;  // a rank-deficient refit dropped an atom
    bool exhausted = false;   // no selectable atom remained
    OpCounters counters;
};

struct LsSolution {
    std::vector<cdouble> gains;  // for the columns that were kept
    CVec residual;
    bool degenerate = false;  // newest column was dropped
};

/// Least-squares refit of y on the given atom columns. A support whose
/// triangular factor has a diagonal condition estimate above 1e10 is treated
/// as rank deficient: the newest atom is dropped and the caller is told.
inline LsSolution ls_refit(const CVec& y, const CMat& atoms) {
    LsSolution out;
    if (atoms.cols() == 0) {
        out.residual = y;
        return out;
    }
    auto solve = [&y](const CMat& a, LsSolution& s) {
        Eigen::ColPivHouseholderQR<CMat> qr(a);
        const auto& r = qr.matrixR();
        double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < a.cols(); ++i) {
            const double d = std::abs(r(i, i));
            dmax = std::max(dmax, d);
            dmin = std::min(dmin, d);
        }
        if (!(dmin > 0.0) || dmax / dmin > 1e10) return false;
        const CVec g = qr.solve(y);
        s.gains.assign(g.data(), g.data() + g.size());
        s.residual = y - a * g;
        return true;
    };
    if (solve(atoms, out)) return out;
    out.degenerate = true;
    out.gains.clear();
    if (atoms.cols() == 1) {
        out.residual = y;
        return out;
    }
    const CMat head = atoms.leftCols(atoms.cols() - 1);
    LsSolution reduced;
    if (solve(head, reduced)) {
        out.gains = std::move(reduced.gains);
        out.residual = std::move(reduced.residual);
    } else {
        out.residual = y;  // badly degenerate support; caller sees the flag
    }
    return out;
}

/// Binary-division refinement of a 2D functional around (x0, y0): evaluate
/// the four corners of the current box, keep the quadrant of the best corner
/// (ties prefer up-up, down-up, up-down, down-down in that order), halve, and
/// return the final box midpoint. The initial box is [x0 +- 1/2] x [y0 +- 1/2];
/// for a symmetric unimodal functional the output lands within 2^-n_ref of
/// the true maximizer on each axis.
template <class F>
std::pair<double, double> br_refine(F&& f, double x0, double y0, int n_ref) {
    if (n_ref < 0) throw std::invalid_argument("br_refine: n_ref must be >= 0");
    double xu = x0 + 0.5, xd = x0 - 0.5;
    double yu = y0 + 0.5, yd = y0 - 0.5;
    for (int it = 0; it < n_ref; ++it) {
        const double xm = 0.5 * (xu + xd), ym = 0.5 * (yu + yd);
        const double fuu = f(xu, yu);
        const double fdu = f(xd, yu);
        const double fud = f(xu, yd);
        const double fdd = f(xd, yd);
        if (fuu >= fdu && fuu >= fud && fuu >= fdd) {
            xd = xm;
            yd = ym;
        } else if (fdu >= fud && fdu >= fdd) {
            xu = xm;
            yd = ym;
        } else if (fud >= fdd) {
            xd = xm;
            yu = ym;
        } else {
            xu = xm;
            yu = ym;
        }
    }
    return {0.5 * (xu + xd), 0.5 * (yu + yd)};
}

namespace detail {

// Atom evaluation with an unrestricted parameter domain; refinement corners
// may step outside [0, D*Ts) x [0, V*delta_f) and the kernels continue them
// periodically.
inline CVec atom_eval_any(const GridConfig& g, const DdSignal& pilot, double tau, double nu) {
    const auto t = make_atom_tables(g, tau / g.sample_period, nu / g.doppler_spacing());
    CVec out;
    atom_apply(t, g, pilot.values, out);
    return out;
}

inline int argmax_correlation(const CVec& corr, const std::vector<char>& blocked) {
    int best = -1;
    double best_val = -1.0;
    for (Eigen::Index j = 0; j < corr.size(); ++j) {
        if (blocked[static_cast<size_t>(j)]) continue;
        const double v = std::norm(corr[j]);
        if (v > best_val) {
            best_val = v;
            best = static_cast<int>(j);
        }
    }
    return best;
}

}  // namespace detail

/// Orthogonal matching pursuit over a prebuilt bank: greedy correlation
/// argmax (ties to the lowest column index), least-squares refit, residual
/// update, loop until ||r||^2 <= xi or the iteration cap. A reselected or
/// rank-degenerate column is skipped rather than aborting the pursuit.
inline SparseEstimate omp(const DdSignal& y, const AtomBank& bank, const StoppingRule& stop) {
    const GridConfig& g = bank.dict.grid;
    detail::require_length(y.size(), g, "omp");
    const int k = bank.dict.size();
    const int l_n = g.symbols();

    SparseEstimate est;
    CVec r = y.values;
    double rn2 = r.squaredNorm();
    std::vector<char> blocked(static_cast<size_t>(k), 0);
    CMat support(l_n, 0);
    std::vector<int> support_cols;

    while (rn2 > stop.xi && est.iterations < stop.max_iter) {
        const CVec corr = bank.columns.adjoint() * r;
        est.counters.corr_products +=
            static_cast<uint64_t>(k) * static_cast<uint64_t>(l_n);
        const int j = detail::argmax_correlation(corr, blocked);
        if (j < 0) {
            est.exhausted = true;
            break;
        }
        blocked[static_cast<size_t>(j)] = 1;

        support.conservativeResize(Eigen::NoChange, support.cols() + 1);
        support.col(support.cols() - 1) = bank.columns.col(j);
        support_cols.push_back(j);

        const LsSolution ls = ls_refit(y.values, support);
        if (ls.degenerate) {
            support.conservativeResize(Eigen::NoChange, support.cols() - 1);
            support_cols.pop_back();
            est.degenerate = true;
            continue;  // column stays blocked
        }

        r = ls.residual;
        rn2 = r.squaredNorm();
        ++est.iterations;
        est.residual_history.push_back(rn2);
        est.entries.clear();
        for (size_t i = 0; i < support_cols.size(); ++i) {
            const int col = support_cols[i];
            est.entries.push_back({bank.dict.tau_point(bank.dict.tau_index_of(col)),
                                   bank.dict.nu_point(bank.dict.nu_index_of(col)),
                                   ls.gains[i]});
        }
    }
    est.residual_norm2 = rn2;
    return est;
}

/// OMP with binary-division refinement: the argmax over the auxiliary grid
/// picks a cell, BR searches the +-1/2-cell offsets around it with 4*n_ref
/// fresh atom evaluations, and the support is refit on columns recomputed at
/// the refined continuous parameters. A refinement that does not beat the
/// selected atom's correlation is discarded in favor of that grid point.
///
/// The local-bin search runs over the auxiliary grid plus the
/// one-past-the-end alias centers of each axis (tau = D*Ts, nu = V*delta_f).
/// The channel is not periodic modulo the grid spans (the Doppler row phase
/// distinguishes nu from nu + V*delta_f), so a path in the top half cell of
/// an axis correlates with the alias center but can sit below the random
/// pilot's ambiguity floor at every in-grid atom; without the alias columns
/// such paths are unrecoverable and no refinement box covers them.
inline SparseEstimate ompbr(const DdSignal& y, const DdSignal& pilot, const GridConfig& grid,
                            const DictionaryConfig& aux, int n_ref, const StoppingRule& stop,
                            AtomCache& cache) {
    detail::require_length(y.size(), grid, "ompbr");
    if (n_ref < 0) throw std::invalid_argument("ompbr: n_ref must be >= 0");
    const BankFetch fetch = build_atom_bank(pilot, aux, cache);
    const AtomBank& bank = *fetch.bank;
    const int k = aux.size();
    const int l_n = grid.symbols();

    SparseEstimate est;
    est.counters.cache_hit = fetch.cache_hit;
    est.counters.bank_build_products = fetch.cache_hit ? 0 : bank.build_products;

    // Search set: the cached bank plus, when refining, the alias centers
    // (top delay row, top Doppler column, and the corner). With n_ref = 0
    // the search is exactly the dictionary and ompbr reduces to omp.
    std::vector<std::pair<double, double>> centers;
    centers.reserve(static_cast<size_t>(k + aux.k_tau + aux.k_nu + 1));
    for (int j = 0; j < k; ++j)
        centers.emplace_back(aux.tau_point(aux.tau_index_of(j)),
                             aux.nu_point(aux.nu_index_of(j)));
    if (n_ref > 0) {
        for (int i = 0; i < aux.k_tau; ++i)
            centers.emplace_back(aux.tau_point(i), aux.nu_point(aux.k_nu));
        for (int j2 = 0; j2 <= aux.k_nu; ++j2)
            centers.emplace_back(aux.tau_point(aux.k_tau), aux.nu_point(j2));
    }
    const int k_ext = static_cast<int>(centers.size());
    CMat search(l_n, k_ext);
    search.leftCols(k) = bank.columns;
    for (int j = k; j < k_ext; ++j) {
        search.col(j) =
            detail::atom_eval_any(grid, pilot, centers[static_cast<size_t>(j)].first,
                                  centers[static_cast<size_t>(j)].second);
        ++est.counters.atom_evals;
    }

    CVec r = y.values;
    double rn2 = r.squaredNorm();
    std::vector<char> dead(static_cast<size_t>(k_ext), 0);
    CMat support(l_n, 0);
    std::vector<std::pair<double, double>> support_params;

    while (rn2 > stop.xi && est.iterations < stop.max_iter) {
        const CVec corr = search.adjoint() * r;
        est.counters.corr_products +=
            static_cast<uint64_t>(k_ext) * static_cast<uint64_t>(l_n);
        const int j = detail::argmax_correlation(corr, dead);
        if (j < 0) {
            est.exhausted = true;
            break;
        }
        const double tau0 = centers[static_cast<size_t>(j)].first;
        const double nu0 = centers[static_cast<size_t>(j)].second;
        const double grid_corr = std::abs(corr[j]);

        double tau_hat = tau0, nu_hat = nu0;
        CVec column = search.col(j);
        if (n_ref > 0) {
            const double ts_step = aux.tau_step(), nu_step = aux.nu_step();
            auto f = [&](double mx, double my) {
                const CVec phi =
                    detail::atom_eval_any(grid, pilot, tau0 + mx * ts_step, nu0 + my * nu_step);
                ++est.counters.atom_evals;
                ++est.counters.refine_atom_evals;
                return std::abs(phi.dot(r));  // |phi^H r|
            };
            const auto [mu_tau, mu_nu] = br_refine(f, 0.0, 0.0, n_ref);
            if (mu_tau != 0.0 || mu_nu != 0.0) {
                const double tau_c = tau0 + mu_tau * ts_step;
                const double nu_c = nu0 + mu_nu * nu_step;
                CVec refined = detail::atom_eval_any(grid, pilot, tau_c, nu_c);
                ++est.counters.atom_evals;  // the candidate refit column
                if (std::abs(refined.dot(r)) >= grid_corr) {
                    tau_hat = tau_c;
                    nu_hat = nu_c;
                    column = std::move(refined);
                }
            }
        }

        bool duplicate = false;
        for (const auto& p : support_params)
            if (p.first == tau_hat && p.second == nu_hat) duplicate = true;
        if (duplicate) {
            dead[static_cast<size_t>(j)] = 1;
            continue;
        }

        support.conservativeResize(Eigen::NoChange, support.cols() + 1);
        support.col(support.cols() - 1) = column;
        support_params.emplace_back(tau_hat, nu_hat);

        const LsSolution ls = ls_refit(y.values, support);
        if (ls.degenerate) {
            support.conservativeResize(Eigen::NoChange, support.cols() - 1);
            support_params.pop_back();
            dead[static_cast<size_t>(j)] = 1;
            est.degenerate = true;
            continue;
        }

        r = ls.residual;
        rn2 = r.squaredNorm();
        ++est.iterations;
        est.residual_history.push_back(rn2);
        est.entries.clear();
        for (size_t i = 0; i < support_params.size(); ++i)
            est.entries.push_back(
                {support_params[i].first, support_params[i].second, ls.gains[i]});
    }
    est.residual_norm2 = rn2;
    return est;
}

}  // namespace zakcs
