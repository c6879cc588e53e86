#pragma once

// Finite transfer matrices for depth-k potentials.
//
// The operator acts on tables indexed by states = admissible words of
// length max(k-1,1).  With row i = evaluation state x and column j = the
// state of a preimage e.x, the matrix satisfies (mat*g)[x] = (L_f g)(x)
// exactly for every depth-(k-1) table g.  Leading eigendata comes from
// normalized power iteration on the matrix and its transpose; complex
// spectra from a dense eigensolver.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cms/errors.hpp"
#include "cms/potential.hpp"
#include "cms/shift_space.hpp"

namespace cms {

inline int state_length(int depth) { return std::max(depth - 1, 1); }

template <class Scalar>
struct TransferMatrix {
    TruncatedShift shift;
    int depth;                              // depth of the generating potential
    std::vector<Word> states;               // E^{max(k-1,1)}, lexicographic
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> mat;
    bool is_complex() const { return std::is_same_v<Scalar, std::complex<double>>; }
};

namespace detail {

inline std::size_t state_index(const std::vector<Word>& states, const Word& w) {
    auto it = std::lower_bound(states.begin(), states.end(), w);
    if (it == states.end() || *it != w)
        throw PreconditionError("transfer: state " + word_to_string(w) + " not found");
    return static_cast<std::size_t>(it - states.begin());
}

// Preimage structure of one evaluation state: for letter e admissible
// before w, the preimage word is e.w (read at full available length) and
// its state is the first ell letters.
template <class Scalar, class Fn>
void foreach_preimage(const BasicDepthPotential<Scalar>& f, const Word& w, const Fn& fn) {
    const TruncatedShift& shift = f.shift();
    Word y;
    y.reserve(w.size() + 1);
    for (Letter e = 1; e <= shift.letters(); ++e) {
        if (!shift.admissible(e, w.front())) continue;
        y.clear();
        y.push_back(e);
        y.insert(y.end(), w.begin(), w.end());
        fn(e, y);
    }
}

} // namespace detail

inline constexpr std::size_t kDefaultDenseDim = 4096;

template <class Scalar>
TransferMatrix<Scalar> build_matrix(const BasicDepthPotential<Scalar>& f,
                                    std::size_t dim_cap = kDefaultDenseDim) {
    const int ell = state_length(f.depth());
    auto states = enumerate_words(f.shift(), ell);
    if (states.size() > dim_cap)
        throw ResourceError("build_matrix: " + std::to_string(states.size()) +
                            " states exceed the dense cap " + std::to_string(dim_cap));
    const auto n = static_cast<Eigen::Index>(states.size());
    TransferMatrix<Scalar> tm{f.shift(), f.depth(), std::move(states), {}};
    tm.mat.setZero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        detail::foreach_preimage(f, tm.states[static_cast<std::size_t>(i)], [&](Letter, const Word& y) {
            Word ystate(y.begin(), y.begin() + ell);
            const auto j = static_cast<Eigen::Index>(detail::state_index(tm.states, ystate));
            tm.mat(i, j) = std::exp(f.value(y));
        });
    }
    return tm;
}

// Compressed row form used for leading eigendata; scales past the dense cap.
struct TransferCsr {
    std::vector<Word> states;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> weight;

    std::size_t dim() const { return states.size(); }

    void apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
        const auto n = static_cast<Eigen::Index>(dim());
        out.setZero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t p = row_ptr[static_cast<std::size_t>(i)];
                 p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
                acc += weight[p] * v[static_cast<Eigen::Index>(col[p])];
            out[i] = acc;
        }
    }

    void apply_transpose(const Eigen::VectorXd& v, Eigen::VectorXd& out) const {
        const auto n = static_cast<Eigen::Index>(dim());
        out.setZero(n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (std::size_t p = row_ptr[static_cast<std::size_t>(i)];
                 p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p)
                out[static_cast<Eigen::Index>(col[p])] += weight[p] * v[i];
    }
};

inline TransferCsr build_csr(const DepthPotential& f, std::size_t entry_cap = 30'000'000) {
    const int ell = state_length(f.depth());
    TransferCsr csr;
    csr.states = enumerate_words(f.shift(), ell);
    const std::size_t n = csr.states.size();
    if (n * static_cast<std::size_t>(f.shift().letters()) > entry_cap)
        throw ResourceError("build_csr: entry cap exceeded");
    csr.row_ptr.assign(n + 1, 0);
    csr.col.reserve(n * 2);
    csr.weight.reserve(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        detail::foreach_preimage(f, csr.states[i], [&](Letter, const Word& y) {
            Word ystate(y.begin(), y.begin() + ell);
            csr.col.push_back(static_cast<std::uint32_t>(detail::state_index(csr.states, ystate)));
            csr.weight.push_back(std::exp(f.value(y)));
        });
        csr.row_ptr[i + 1] = csr.col.size();
    }
    return csr;
}

struct PowerIterationResult {
    double lambda = 0.0;
    Eigen::VectorXd vec;
    double rate = 0.0;   // observed linear convergence factor (0 when immediate)
    int iterations = 0;
};

// Normalized power iteration for a nonnegative irreducible operator,
// starting from the constant vector.  Stops when successive eigenvalue
// estimates differ by less than tol twice in a row.
template <class ApplyFn>
PowerIterationResult power_iteration(std::size_t dim, const ApplyFn& apply, double tol = 1e-12,
                                     long max_iter = 100000) {
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / static_cast<double>(dim);
    Eigen::VectorXd w(n);
    double lambda = 0.0, prev_diff = -1.0;
    std::vector<double> rates;
    int stable = 0;
    for (long it = 1; it <= max_iter; ++it) {
        apply(v, w);
        const double nrm = w.template lpNorm<1>();
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw ConvergenceError("power_iteration: iterate collapsed (reducible or invalid matrix)");
        w /= nrm;
        const double diff = (w - v).template lpNorm<Eigen::Infinity>();
        if (prev_diff > 1e-14) {
            rates.push_back(diff / prev_diff);
            if (rates.size() > 8) rates.erase(rates.begin());
        }
        const bool lam_ok = std::abs(nrm - lambda) < tol * std::max(1.0, nrm);
        stable = lam_ok ? stable + 1 : 0;
        lambda = nrm;
        v.swap(w);
        prev_diff = diff;
        if (stable >= 2) {
            PowerIterationResult res{lambda, v, 0.0, static_cast<int>(it)};
            if (!rates.empty()) {
                std::vector<double> r = rates;
                std::nth_element(r.begin(), r.begin() + static_cast<long>(r.size()) / 2, r.end());
                res.rate = std::min(r[r.size() / 2], 1.0);
            }
            return res;
        }
    }
    throw ConvergenceError("power_iteration: no convergence after " + std::to_string(max_iter) +
                           " iterations, last eigenvalue estimate " + std::to_string(lambda));
}

struct PowerOptions {
    double tol = 1e-12;
    long max_iter = 100000;
    bool dense_spectrum = true;       // dense second eigenvalue when affordable
    std::size_t dense_cap = 2000;     // dense eigensolver dimension cap
    std::size_t dim_cap = 2'000'000;  // state count cap for eigendata
    std::size_t entry_cap = 30'000'000;
    int gibbs_max_len = 8;
    std::size_t gibbs_cylinder_cap = 20000;
};

struct SpectralData {
    DepthPotential potential;
    std::vector<Word> states;
    double lambda = 0.0;
    double pressure = 0.0;
    Eigen::VectorXd h;    // eigenfunction on states, nu(h) = 1
    Eigen::VectorXd nu;   // eigenmeasure cylinder weights, sums to 1
    Eigen::VectorXd mu;   // invariant Gibbs measure, h .* nu
    double gamma = 0.0;                   // empirical convergence factor
    std::optional<double> gamma_dense;    // |lambda_2|/lambda_1 from the dense solve
    std::optional<double> second_modulus; // |lambda_2| from the dense solve
    double positivity_margin = 0.0;       // min h
    double gibbs_constant = 1.0;
    Word gibbs_worst;
    double stationarity_residual = 0.0;
    double eigen_residual_h = 0.0;        // |L h - lambda h|_inf / (lambda |h|_inf)
    double eigen_residual_nu = 0.0;
    int iterations = 0;

    int state_len() const { return state_length(potential.depth()); }
};

// nu-mass of the cylinder [w] for any word length: sums over state
// refinements when |w| is shorter than a state, walks the one-step
// recursion nu([w]) = lambda^{-1} e^{u(w)} nu([sigma w]) when longer.
inline double nu_cylinder_mass(const SpectralData& sd, const Word& w) {
    if (!sd.potential.shift().word_admissible(w)) return 0.0;
    const int ell = sd.state_len();
    const int n = static_cast<int>(w.size());
    if (n < ell) {
        auto lo = std::lower_bound(sd.states.begin(), sd.states.end(), w);
        double acc = 0.0;
        for (auto it = lo; it != sd.states.end() && std::equal(w.begin(), w.end(), it->begin()); ++it)
            acc += sd.nu[it - sd.states.begin()];
        return acc;
    }
    double factor = 1.0;
    Word cur = w;
    while (static_cast<int>(cur.size()) > ell) {
        factor *= std::exp(sd.potential.value(cur)) / sd.lambda;
        cur.erase(cur.begin());
    }
    return factor * sd.nu[static_cast<Eigen::Index>(detail::state_index(sd.states, cur))];
}

inline double mu_cylinder_mass(const SpectralData& sd, const Word& w) {
    if (!sd.potential.shift().word_admissible(w)) return 0.0;
    const int ell = sd.state_len();
    if (static_cast<int>(w.size()) < ell) {
        auto lo = std::lower_bound(sd.states.begin(), sd.states.end(), w);
        double acc = 0.0;
        for (auto it = lo; it != sd.states.end() && std::equal(w.begin(), w.end(), it->begin()); ++it)
            acc += sd.mu[it - sd.states.begin()];
        return acc;
    }
    // h is constant on [w] once |w| >= state length
    Word st(w.begin(), w.begin() + ell);
    return sd.h[static_cast<Eigen::Index>(detail::state_index(sd.states, st))] * nu_cylinder_mass(sd, w);
}

struct GibbsReport {
    double c = 1.0;
    Word worst_cylinder;
    std::vector<double> c_by_len;  // cumulative max across lengths 1..L
    int scanned_len = 0;
};

// Scan of the Gibbs inequality over cylinders of length <= L_max: the
// reported c is the empirical max of max(ratio, 1/ratio) with
// ratio = nu([w]) / exp(S_n u(tau_w) - n P) at canonical points tau_w.
inline GibbsReport verify_gibbs(const SpectralData& sd, int L_max,
                                std::size_t cylinder_cap = 200000) {
    GibbsReport rep;
    const auto& shift = sd.potential.shift();
    std::size_t scanned = 0;
    for (int n = 1; n <= L_max; ++n) {
        std::vector<Word> words;
        try {
            words = enumerate_words(shift, n, cylinder_cap - std::min(scanned, cylinder_cap));
        } catch (const ResourceError&) {
            break;
        }
        scanned += words.size();
        double cn = rep.c;
        for (const auto& w : words) {
            const Anchor tau = canonical_extension(shift, w);
            const double sn = birkhoff_sum(sd.potential, Word{}, tau, n);
            const double ratio = nu_cylinder_mass(sd, w) / std::exp(sn - n * sd.pressure);
            const double dev = std::max(ratio, 1.0 / ratio);
            if (dev > cn) {
                cn = dev;
                if (dev > rep.c) rep.worst_cylinder = w;
            }
        }
        rep.c = std::max(rep.c, cn);
        rep.c_by_len.push_back(rep.c);
        rep.scanned_len = n;
    }
    return rep;
}

inline SpectralData leading_eigendata(const DepthPotential& u, const PowerOptions& opts = {}) {
    const auto summ = summability_constant(u);
    if (summ.has_certificate() && !summ.summable())
        throw PreconditionError("leading_eigendata: potential is not summable under its tail rule");

    TransferCsr csr = build_csr(u, opts.entry_cap);
    if (csr.dim() > opts.dim_cap) throw ResourceError("leading_eigendata: dimension cap exceeded");
    const auto n = static_cast<Eigen::Index>(csr.dim());

    auto fwd = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { csr.apply(v, out); };
    auto bwd = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { csr.apply_transpose(v, out); };
    PowerIterationResult ph = power_iteration(csr.dim(), fwd, opts.tol, opts.max_iter);
    PowerIterationResult pn = power_iteration(csr.dim(), bwd, opts.tol, opts.max_iter);

    SpectralData sd{u, csr.states};
    sd.lambda = ph.lambda;
    sd.pressure = std::log(ph.lambda);
    sd.gamma = std::max(ph.rate, pn.rate);
    sd.iterations = ph.iterations + pn.iterations;

    sd.nu = pn.vec / pn.vec.sum();
    sd.h = ph.vec / sd.nu.dot(ph.vec);
    sd.mu = sd.h.cwiseProduct(sd.nu);
    sd.positivity_margin = sd.h.minCoeff();

    Eigen::VectorXd tmp(n);
    csr.apply(sd.h, tmp);
    sd.eigen_residual_h = (tmp - sd.lambda * sd.h).lpNorm<Eigen::Infinity>() /
                          (sd.lambda * sd.h.lpNorm<Eigen::Infinity>());
    csr.apply_transpose(sd.nu, tmp);
    sd.eigen_residual_nu = (tmp - sd.lambda * sd.nu).lpNorm<Eigen::Infinity>() /
                           (sd.lambda * sd.nu.lpNorm<Eigen::Infinity>());

    // sigma-invariance of mu at the matrix level
    {
        double resid = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Word& w = sd.states[static_cast<std::size_t>(i)];
            double acc = 0.0;
            for (Letter e = 1; e <= u.shift().letters(); ++e) {
                if (!u.shift().admissible(e, w.front())) continue;
                Word ew;
                ew.reserve(w.size() + 1);
                ew.push_back(e);
                ew.insert(ew.end(), w.begin(), w.end());
                acc += mu_cylinder_mass(sd, ew);
            }
            resid = std::max(resid, std::abs(acc - sd.mu[i]));
        }
        sd.stationarity_residual = resid;
    }

    if (opts.dense_spectrum && csr.dim() <= opts.dense_cap) {
        TransferMatrix<double> tm = build_matrix(u, opts.dense_cap);
        Eigen::EigenSolver<Eigen::MatrixXd> es(tm.mat, /*computeEigenvectors=*/false);
        std::vector<double> mods(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) mods[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()[i]);
        std::sort(mods.rbegin(), mods.rend());
        if (mods.size() >= 2) {
            sd.second_modulus = mods[1];
            sd.gamma_dense = mods[1] / mods[0];
        } else {
            sd.second_modulus = 0.0;
            sd.gamma_dense = 0.0;
        }
    }

    {
        GibbsReport gr = verify_gibbs(sd, opts.gibbs_max_len, opts.gibbs_cylinder_cap);
        sd.gibbs_constant = gr.c;
        sd.gibbs_worst = gr.worst_cylinder;
    }
    return sd;
}

// (1/n) log sum_{w in E^n} exp(sup_{[w]} S_n u) for n = 1..n_max.  The sup is
// exact for depth-k tables: max over admissible length-(k-1) extensions.
inline std::vector<double> pressure_by_limit(const DepthPotential& u, int n_max,
                                             std::size_t cap = kDefaultWordCap) {
    if (n_max < 1) throw PreconditionError("pressure_by_limit: n_max must be >= 1");
    std::vector<double> out;
    const int k = u.depth();
    const auto& shift = u.shift();
    for (int n = 1; n <= n_max; ++n) {
        const auto words = enumerate_words(shift, n, cap);
        double acc = 0.0;
        for (const auto& w : words) {
            double sup = -std::numeric_limits<double>::infinity();
            // extensions of length k-1 after w
            Word ext;
            auto eval = [&]() {
                Word full = w;
                full.insert(full.end(), ext.begin(), ext.end());
                double s = 0.0;
                for (int j = 0; j < n; ++j) {
                    Word sub(full.begin() + j, full.begin() + j + k);
                    s += u.value(sub);
                }
                sup = std::max(sup, s);
            };
            std::function<void()> rec = [&]() {
                if (static_cast<int>(ext.size()) == k - 1) {
                    eval();
                    return;
                }
                const Letter prev = ext.empty() ? w.back() : ext.back();
                for (Letter b = 1; b <= shift.letters(); ++b) {
                    if (!shift.admissible(prev, b)) continue;
                    ext.push_back(b);
                    rec();
                    ext.pop_back();
                }
            };
            rec();
            acc += std::exp(sup);
        }
        out.push_back(std::log(acc) / n);
    }
    return out;
}

struct RpfDecayReport {
    std::vector<double> errors;  // e_n = |lambda^{-n} L^n g - nu(g) h|_inf, n = 0..n_max
    double fitted_rate = 0.0;
    double limit_value = 0.0;    // nu(g)
};

inline RpfDecayReport rpf_convergence(const SpectralData& sd, const Eigen::VectorXd& g, int n_max) {
    if (g.size() != static_cast<Eigen::Index>(sd.states.size()))
        throw PreconditionError("rpf_convergence: table size does not match states");
    TransferCsr csr = build_csr(sd.potential);
    RpfDecayReport rep;
    rep.limit_value = sd.nu.dot(g);
    Eigen::VectorXd v = g, w(g.size());
    const Eigen::VectorXd target = rep.limit_value * sd.h;
    for (int nstep = 0; nstep <= n_max; ++nstep) {
        rep.errors.push_back((v - target).lpNorm<Eigen::Infinity>());
        if (nstep == n_max) break;
        csr.apply(v, w);
        v = w / sd.lambda;
    }
    // geometric fit on the decaying part
    const double top = *std::max_element(rep.errors.begin(), rep.errors.end());
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < rep.errors.size(); ++i)
        if (rep.errors[i] > std::max(top * 1e-12, 1e-300))
            pts.push_back({static_cast<double>(i), std::log(rep.errors[i])});
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double m = static_cast<double>(pts.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        rep.fitted_rate = std::exp(slope);
    }
    return rep;
}

struct ComplexSpectrum {
    std::vector<std::complex<double>> eigenvalues;  // sorted by modulus, descending
    double spectral_radius = 0.0;
    double reference_radius = 0.0;  // e^{P(Re f)}
};

inline ComplexSpectrum complex_spectrum(const ComplexDepthPotential& f,
                                        std::size_t dense_cap = 2000) {
    TransferMatrix<std::complex<double>> tm = build_matrix(f, dense_cap);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(tm.mat, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw ConvergenceError("complex_spectrum: eigensolver failed");
    ComplexSpectrum out;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](std::complex<double> a, std::complex<double> b) {
                  if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
                  return std::arg(a) < std::arg(b);
              });
    out.spectral_radius = out.eigenvalues.empty() ? 0.0 : std::abs(out.eigenvalues.front());

    TransferCsr csr = build_csr(real_part(f));
    auto fwd = [&](const Eigen::VectorXd& v, Eigen::VectorXd& o) { csr.apply(v, o); };
    out.reference_radius = power_iteration(csr.dim(), fwd).lambda;
    return out;
}

struct AFunctionClassification {
    enum class Kind { a_function, regular, inconclusive };
    Kind kind = Kind::inconclusive;
    double angle = 0.0;            // a, for a-functions
    double spectral_radius = 0.0;
    double reference_radius = 0.0;
};

// Dichotomy of the complex spectrum: an eigenvalue of modulus e^{P(Re f)}
// makes f an a-function with a = its argument; a spectral radius strictly
// below e^{P(Re f)} makes f regular; anything else is inconclusive at this
// truncation.
inline AFunctionClassification classify_a_function(const ComplexDepthPotential& f, double tol = 1e-9,
                                                   std::size_t dense_cap = 2000) {
    const ComplexSpectrum sp = complex_spectrum(f, dense_cap);
    AFunctionClassification out;
    out.spectral_radius = sp.spectral_radius;
    out.reference_radius = sp.reference_radius;
    for (const auto& ev : sp.eigenvalues) {
        if (std::abs(std::abs(ev) - sp.reference_radius) <= tol) {
            out.kind = AFunctionClassification::Kind::a_function;
            double a = std::arg(ev);
            if (a < 0) a += 2.0 * std::acos(-1.0);
            out.angle = a;
            return out;
        }
    }
    if (sp.spectral_radius < sp.reference_radius - tol) {
        out.kind = AFunctionClassification::Kind::regular;
        return out;
    }
    out.kind = AFunctionClassification::Kind::inconclusive;
    return out;
}

enum class Against { nu, mu };

// Integral of a depth-d table (d <= k) against the eigenmeasure or the
// Gibbs measure, via cylinder masses.
inline double integrate(const SpectralData& sd, const DepthPotential& g, Against measure) {
    if (!(g.shift() == sd.potential.shift()))
        throw PreconditionError("integrate: shifts differ");
    if (g.depth() > sd.potential.depth())
        throw PreconditionError("integrate: depth mismatch (observable deeper than the potential)");
    const int ell = sd.state_len();
    double acc = 0.0;
    if (g.depth() <= ell) {
        for (std::size_t i = 0; i < sd.states.size(); ++i) {
            const double mass = measure == Against::nu ? sd.nu[static_cast<Eigen::Index>(i)]
                                                       : sd.mu[static_cast<Eigen::Index>(i)];
            acc += g.value(sd.states[i]) * mass;
        }
        return acc;
    }
    const auto words = enumerate_words(g.shift(), g.depth());
    for (const auto& w : words) {
        const double mass = measure == Against::nu ? nu_cylinder_mass(sd, w) : mu_cylinder_mass(sd, w);
        acc += g.value(w) * mass;
    }
    return acc;
}

// utilde = u - P + log h - log h o sigma as a depth max(k,2) table.
// L_utilde fixes the constant function; validation deviations are stored.
inline NormalizedPotential normalize(const DepthPotential& u, const SpectralData& sd) {
    if (!(sd.potential.shift() == u.shift()) || sd.potential.depth() != u.depth() ||
        sd.potential.values() != u.values())
        throw PreconditionError("normalize: spectral data is stale for this potential");
    const int k = u.depth();
    const int kk = std::max(k, 2);
    const int ell = state_length(k);

    auto log_h_at = [&](const Word& w) {
        Word st(w.begin(), w.begin() + ell);
        return std::log(sd.h[static_cast<Eigen::Index>(detail::state_index(sd.states, st))]);
    };

    const FlatWords flat = enumerate_words_flat(u.shift(), kk);
    std::vector<double> vals(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const Word w = flat.get(i);
        const Word sw(w.begin() + 1, w.end());
        vals[i] = u.value(w) - sd.pressure + log_h_at(w) - log_h_at(sw);
    }
    // the log h correction is a depth-kk table; its Holder norm is bounded by
    // twice the log-oscillation of h over theta^{kk-1}
    const double h_osc = std::log(sd.h.maxCoeff() / sd.h.minCoeff());
    const double corr_bound = 2.0 * h_osc / std::pow(u.theta(), kk - 1);
    NormalizedPotential np{u, sd.pressure, sd.states, {},
                           DepthPotential(u.shift(), kk, std::move(vals), u.theta(),
                                          u.holder_norm_bound() + corr_bound, u.tail_rule()),
                           0.0, 0.0};
    np.log_h.resize(sd.states.size());
    for (std::size_t i = 0; i < sd.states.size(); ++i)
        np.log_h[i] = std::log(sd.h[static_cast<Eigen::Index>(i)]);

    TransferCsr csr = build_csr(np.potential);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(csr.dim())), out;
    csr.apply(ones, out);
    np.fixed_point_deviation = (out - ones).lpNorm<Eigen::Infinity>();
    auto fwd = [&](const Eigen::VectorXd& v, Eigen::VectorXd& o) { csr.apply(v, o); };
    np.eigenvalue_deviation = std::abs(power_iteration(csr.dim(), fwd).lambda - 1.0);
    return np;
}

} // namespace cms
