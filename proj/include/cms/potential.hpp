#pragma once

// Depth-k locally constant potentials.
//
// A depth-k potential reads exactly the first k coordinates of a point, so
// it is a finite table over the admissible words of length k.  Holder
// potentials are handled through depth-k projections with the explicit
// error bound  var_k <= |f|_theta * theta^k; the Holder norm bound and the
// alphabet tail rule are user-declared, never inferred.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "cms/errors.hpp"
#include "cms/shift_space.hpp"

namespace cms {

// Closed-form bound T(M) >= sum_{e>M} exp(sup u|[e]).  `power` declares
// exp(sup u|[e]) <= c * e^{-p}; `geometric` declares <= c * r^e.
struct TailRule {
    enum class Kind { none, zero, power, geometric, custom };

    Kind kind = Kind::none;
    double c = 0.0;
    double p = 0.0;  // power exponent
    double r = 0.0;  // geometric ratio
    std::function<double(int)> fn;

    static TailRule none() { return {}; }
    static TailRule zero() { return {Kind::zero, 0, 0, 0, nullptr}; }
    static TailRule power(double c, double p) { return {Kind::power, c, p, 0, nullptr}; }
    static TailRule geometric(double c, double r) { return {Kind::geometric, c, 0, r, nullptr}; }
    static TailRule custom(std::function<double(int)> fn) { return {Kind::custom, 0, 0, 0, std::move(fn)}; }

    // nullopt = no rule declared ("level-M only, no global certificate").
    // +infinity is a meaningful answer: the declared rule diverges.
    std::optional<double> bound(int M) const {
        const double inf = std::numeric_limits<double>::infinity();
        switch (kind) {
            case Kind::none: return std::nullopt;
            case Kind::zero: return 0.0;
            case Kind::power:
                if (p <= 1.0) return inf;
                return c * std::pow(static_cast<double>(M), 1.0 - p) / (p - 1.0);
            case Kind::geometric:
                if (r <= 0.0) return 0.0;
                if (r >= 1.0) return inf;
                return c * std::pow(r, M + 1) / (1.0 - r);
            case Kind::custom: return fn(M);
        }
        return std::nullopt;
    }
};

template <class Scalar>
class BasicDepthPotential {
    static_assert(std::is_same_v<Scalar, double> || std::is_same_v<Scalar, std::complex<double>>);

public:
    BasicDepthPotential(TruncatedShift shift, int depth, std::vector<Scalar> values_lex,
                        double theta = 0.5, double holder_norm_bound = 0.0,
                        TailRule tail = TailRule::zero())
        : shift_(std::move(shift)), depth_(depth), words_(enumerate_words_flat(shift_, depth)),
          values_(std::move(values_lex)), theta_(theta), holder_norm_bound_(holder_norm_bound),
          tail_(std::move(tail)) {
        if (depth_ < 1) throw PreconditionError("potential: depth must be >= 1");
        if (theta_ <= 0.0 || theta_ >= 1.0) throw PreconditionError("potential: theta must lie in (0,1)");
        if (values_.size() != words_.size())
            throw PreconditionError("potential: expected " + std::to_string(words_.size()) +
                                    " values for depth " + std::to_string(depth_) + ", got " +
                                    std::to_string(values_.size()));
    }

    static BasicDepthPotential constant(const TruncatedShift& shift, Scalar c, int depth = 1,
                                        double theta = 0.5) {
        auto words = enumerate_words(shift, depth);
        return BasicDepthPotential(shift, depth, std::vector<Scalar>(words.size(), c), theta, 0.0,
                                   TailRule::zero());
    }

    // Depth-1 table from per-letter values.
    static BasicDepthPotential from_letter_values(const TruncatedShift& shift, std::vector<Scalar> vals,
                                                  double theta = 0.5, TailRule tail = TailRule::zero()) {
        if (static_cast<int>(vals.size()) != shift.letters())
            throw PreconditionError("potential: one value per letter required");
        return BasicDepthPotential(shift, 1, std::move(vals), theta, 0.0, std::move(tail));
    }

    const TruncatedShift& shift() const { return shift_; }
    int depth() const { return depth_; }
    double theta() const { return theta_; }
    double holder_norm_bound() const { return holder_norm_bound_; }
    const TailRule& tail_rule() const { return tail_; }
    const FlatWords& words() const { return words_; }
    const std::vector<Scalar>& values() const { return values_; }

    void set_holder_norm_bound(double b) { holder_norm_bound_ = b; }
    void set_tail_rule(TailRule t) { tail_ = std::move(t); }

    std::size_t index_of(const Word& w) const {
        auto idx = words_.find_prefix(w);
        if (!idx)
            throw PreconditionError("potential: word " + word_to_string(w) + " not admissible at depth " +
                                    std::to_string(depth_));
        return *idx;
    }

    // Value on the cylinder [w] for any admissible w with |w| >= depth.
    Scalar value(const Word& w) const {
        if (static_cast<int>(w.size()) < depth_)
            throw PreconditionError("potential: word shorter than depth");
        return values_[index_of(w)];
    }

    // Value at a point given by an arbitrary letter stream.
    template <class LetterAt>
    Scalar value_at_stream(const LetterAt& letter, std::size_t offset = 0) const {
        Word w(static_cast<std::size_t>(depth_));
        for (int i = 0; i < depth_; ++i) w[static_cast<std::size_t>(i)] = letter(offset + i);
        return values_[index_of(w)];
    }

    BasicDepthPotential lifted(int new_depth) const {
        if (new_depth < depth_) throw PreconditionError("potential: cannot lift to a smaller depth");
        if (new_depth == depth_) return *this;
        auto flat = enumerate_words_flat(shift_, new_depth);
        std::vector<Scalar> vals;
        vals.reserve(flat.size());
        for (std::size_t i = 0; i < flat.size(); ++i) vals.push_back(value(flat.get(i)));
        return BasicDepthPotential(shift_, new_depth, std::move(vals), theta_, holder_norm_bound_, tail_);
    }

private:
    TruncatedShift shift_;
    int depth_;
    FlatWords words_;
    std::vector<Scalar> values_;
    double theta_;
    double holder_norm_bound_;
    TailRule tail_;
};

using DepthPotential = BasicDepthPotential<double>;
using ComplexDepthPotential = BasicDepthPotential<std::complex<double>>;

inline DepthPotential real_part(const ComplexDepthPotential& f) {
    std::vector<double> vals;
    vals.reserve(f.values().size());
    for (auto z : f.values()) vals.push_back(z.real());
    return DepthPotential(f.shift(), f.depth(), std::move(vals), f.theta(), f.holder_norm_bound(),
                          f.tail_rule());
}

inline DepthPotential imag_part(const ComplexDepthPotential& f) {
    std::vector<double> vals;
    vals.reserve(f.values().size());
    for (auto z : f.values()) vals.push_back(z.imag());
    return DepthPotential(f.shift(), f.depth(), std::move(vals), f.theta(), f.holder_norm_bound(),
                          f.tail_rule());
}

inline ComplexDepthPotential combine(const DepthPotential& re, const DepthPotential& im) {
    if (!(re.shift() == im.shift()))
        throw PreconditionError("combine: potentials live on different shifts");
    const int d = std::max(re.depth(), im.depth());
    auto rl = re.lifted(d);
    auto il = im.lifted(d);
    std::vector<std::complex<double>> vals(rl.values().size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = {rl.values()[i], il.values()[i]};
    return ComplexDepthPotential(re.shift(), d, std::move(vals),
                                 std::min(re.theta(), im.theta()),
                                 re.holder_norm_bound() + im.holder_norm_bound(), re.tail_rule());
}

// a*f + b*g lifted to the common depth.
inline DepthPotential linear_combination(double a, const DepthPotential& f, double b,
                                         const DepthPotential& g) {
    if (!(f.shift() == g.shift()))
        throw PreconditionError("linear_combination: potentials live on different shifts");
    const int d = std::max(f.depth(), g.depth());
    auto fl = f.lifted(d);
    auto gl = g.lifted(d);
    std::vector<double> vals(fl.values().size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        vals[i] = a * fl.values()[i] + b * gl.values()[i];
    TailRule tail = TailRule::none();
    if (f.tail_rule().kind == TailRule::Kind::zero && g.tail_rule().kind == TailRule::Kind::zero)
        tail = TailRule::zero();
    return DepthPotential(f.shift(), d, std::move(vals), std::min(f.theta(), g.theta()),
                          std::abs(a) * f.holder_norm_bound() + std::abs(b) * g.holder_norm_bound(),
                          tail);
}

// S_n f on the point prefix . anchor; S_0 f = 0.
template <class Scalar>
Scalar birkhoff_sum(const BasicDepthPotential<Scalar>& f, const Word& prefix, const Anchor& anchor,
                    int n) {
    if (n < 0) throw PreconditionError("birkhoff_sum: negative n");
    const TruncatedShift& shift = f.shift();
    if (!shift.word_admissible(prefix) || !anchor_valid(shift, anchor) ||
        (!prefix.empty() && !shift.admissible(prefix.back(), anchor.letter_at(0))))
        throw PreconditionError("birkhoff_sum: inadmissible concatenation");
    auto letter = [&](std::size_t i) -> Letter {
        if (i < prefix.size()) return prefix[i];
        return anchor.letter_at(i - prefix.size());
    };
    Scalar sum{};
    for (int j = 0; j < n; ++j) sum += f.value_at_stream(letter, static_cast<std::size_t>(j));
    return sum;
}

struct SummabilityReport {
    double level_sum = 0.0;           // sum_{e<=M} exp(sup u|[e]), exact for the table
    std::optional<double> tail;       // declared tail bound; nullopt = no certificate
    bool has_certificate() const { return tail.has_value(); }
    bool summable() const { return has_certificate() && std::isfinite(level_sum + *tail); }
    double total() const {
        return level_sum + (tail ? *tail : 0.0);
    }
};

// C_M + T(M) of the summability condition; sup over [e] is the exact max of
// the depth-k table over words starting with e.
inline SummabilityReport summability_constant(const DepthPotential& u) {
    SummabilityReport rep;
    std::vector<double> sup_by_letter(static_cast<std::size_t>(u.shift().letters()),
                                      -std::numeric_limits<double>::infinity());
    const auto& words = u.words();
    const auto& vals = u.values();
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto& s = sup_by_letter[static_cast<std::size_t>(words.letter(i, 0) - 1)];
        s = std::max(s, vals[i]);
    }
    for (double s : sup_by_letter)
        if (std::isfinite(s)) rep.level_sum += std::exp(s);
    rep.tail = u.tail_rule().bound(u.shift().letters());
    return rep;
}

// Majorant of |S_n f(wx) - S_n f(wy)| over all admissible w of length n and
// arbitrary tails x, y: the j-th Birkhoff term compares points agreeing in
// n-j coordinates, so the sum is bounded by |f|_theta * (theta + ... +
// theta^n) <= |f|_theta * theta/(1-theta).  When the tails agree on m
// further coordinates every exponent gains m.
template <class Scalar>
double distortion_bound(const BasicDepthPotential<Scalar>& f, int n, int tail_agreement = 0) {
    if (n < 1) throw PreconditionError("distortion_bound: n must be >= 1");
    if (tail_agreement < 0) throw PreconditionError("distortion_bound: negative tail agreement");
    const double th = f.theta();
    const double partial = th * (1.0 - std::pow(th, n)) / (1.0 - th);
    return f.holder_norm_bound() * std::pow(th, tail_agreement) * partial;
}

// Exhaustive var_n estimate from the table: max over pairs of depth words
// agreeing on the first n letters.  Exactly 0 for n >= depth.
template <class Scalar>
double variation(const BasicDepthPotential<Scalar>& f, int n) {
    if (n < 0) throw PreconditionError("variation: negative n");
    if (n >= f.depth()) return 0.0;
    const auto& words = f.words();
    const auto& vals = f.values();
    auto same_prefix = [&](std::size_t a, std::size_t b) {
        for (int j = 0; j < n; ++j)
            if (words.letter(a, j) != words.letter(b, j)) return false;
        return true;
    };
    double best = 0.0;
    // words are sorted, so equal-prefix blocks are contiguous
    std::size_t i = 0;
    while (i < words.size()) {
        std::size_t j = i + 1;
        while (j < words.size() && same_prefix(i, j)) ++j;
        for (std::size_t a = i; a < j; ++a)
            for (std::size_t b = a + 1; b < j; ++b)
                best = std::max(best, std::abs(vals[a] - vals[b]));
        i = j;
    }
    return best;
}

// Evaluation rule for a full-depth potential at an eventually periodic point.
template <class Scalar>
using PointRule = std::function<Scalar(const TruncatedShift&, const Anchor&)>;

template <class Scalar>
struct ProjectionResult {
    BasicDepthPotential<Scalar> potential;
    double error_bound;  // |f|_theta * theta^k
};

// Depth-k projection: evaluate the rule at the canonical point of each
// k-cylinder (lexicographically least admissible extension).
template <class Scalar>
ProjectionResult<Scalar> depth_project(const TruncatedShift& shift, const PointRule<Scalar>& rule,
                                       int k, double theta, double holder_norm_bound,
                                       TailRule tail = TailRule::zero()) {
    const FlatWords flat = enumerate_words_flat(shift, k);
    std::vector<Scalar> vals;
    vals.reserve(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i)
        vals.push_back(rule(shift, canonical_extension(shift, flat.get(i))));
    BasicDepthPotential<Scalar> pot(shift, k, std::move(vals), theta, holder_norm_bound,
                                    std::move(tail));
    return {std::move(pot), holder_norm_bound * std::pow(theta, k)};
}

// Value of the continued fraction [0; a_1, a_2, ...] read from an anchor.
// Backward evaluation over 64 coordinates; the truncation error is below
// machine precision because convergent denominators grow at least like
// Fibonacci numbers.
inline double continued_fraction_value(const Anchor& a) {
    const int terms = 64;
    double x = 0.0;
    for (int i = terms - 1; i >= 0; --i)
        x = 1.0 / (static_cast<double>(a.letter_at(static_cast<std::size_t>(i))) + x);
    return x;
}

// Gauss-map conformal potential u_s(w) = -2s log(w_1 + [0; w_2, w_3, ...]),
// projected to depth k.  Requires a full shift (continued fraction digits
// are unconstrained).  theta = ((sqrt 5 - 1)/2)^2.
inline ProjectionResult<double> gauss_potential(const TruncatedShift& shift, double s, int k) {
    if (!shift.full_shift()) throw PreconditionError("gauss_potential: requires a full shift");
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    const double theta = golden * golden;
    // Canonical extension on a full shift appends 1,1,1,..., and the all-ones
    // continued fraction tail is exactly the golden mean, so the value on a
    // k-cylinder folds backward from g in k-1 steps.
    const FlatWords flat = enumerate_words_flat(shift, k);
    std::vector<double> vals(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) {
        double x = golden;
        for (int j = k - 1; j >= 1; --j)
            x = 1.0 / (static_cast<double>(flat.letter(i, j)) + x);
        vals[i] = -2.0 * s * std::log(static_cast<double>(flat.letter(i, 0)) + x);
    }
    // var_n(u_s) <= 2s * theta^{n-1}, hence |u_s|_theta <= 2s/theta
    DepthPotential pot(shift, k, std::move(vals), theta, 2.0 * s / theta,
                       TailRule::power(1.0, 2.0 * s));
    return {std::move(pot), (2.0 * s / theta) * std::pow(theta, k)};
}

// Normalisation data: utilde = u - P + log h - log h o sigma as a depth
// max(k,2) table.  The transfer module builds and validates it.
struct NormalizedPotential {
    DepthPotential base;
    double pressure_shift = 0.0;
    std::vector<Word> states;
    std::vector<double> log_h;
    DepthPotential potential;       // the normalised table
    double eigenvalue_deviation = 0.0;   // |lambda(utilde) - 1|
    double fixed_point_deviation = 0.0;  // max |L_utilde 1 - 1|
};

} // namespace cms
