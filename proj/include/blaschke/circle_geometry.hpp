#pragma once

// Closed subsets E of the unit circle T, their complementary gaps, the
// neighbourhood measures |E_x| and the Ahern-Clark type beta(E).
//
// Angles are radians. Measures on T are normalised so that |T| = 1.

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace blaschke {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle into [0, 2*pi).
double normalize_angle(double a);

/// Reduces an angle into (-pi, pi].
double signed_angle(double a);

/// A point t = e^{i angle} of the unit circle; angle kept in [0, 2*pi).
class CirclePoint {
public:
    CirclePoint() = default;
    explicit CirclePoint(double angle) : angle_(normalize_angle(angle)) {}
    static CirclePoint from_complex(std::complex<double> z);

    double angle() const { return angle_; }
    std::complex<double> value() const { return std::polar(1.0, angle_); }

    friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

private:
    double angle_ = 0.0;
};

/// Boundary distance convention. Chord: |t1 - t2|. Arc: shortest arc length.
enum class Metric { Chord, Arc };

double circular_distance(CirclePoint t1, CirclePoint t2, Metric metric);

// Generators --------------------------------------------------------------

struct FinitePoints {
    std::vector<double> angles;
};

/// Closed arcs given as (start angle, length); length 0 is a single point.
struct ClosedArcs {
    std::vector<std::pair<double, double>> arcs;
};

/// {e^{i phi_n}} u {1}, phi_n = sum_{k>=n} 2^{-k}.
struct GeometricTail {
    std::size_t depth = 0;  // number of retained phi_n; 0 = automatic
};

/// {e^{i phi_n}} u {1}, phi_n = c sum_{k>=n} k^{-gamma}, c = 1/zeta(gamma).
struct PowerTail {
    double gamma = 2.0;
    std::size_t depth = 0;
};

/// {e^{i phi_n}} u {1}, phi_n = c sum_{k>=n} 1/(k log^2 k), n >= 2.
struct LogTail {
    std::size_t depth = 0;
};

/// Middle-omega Cantor set on the arc [arc_start, arc_start + arc_length].
/// With the default full-circle arc the two end pieces join at angle 0.
struct Cantor {
    double omega = 1.0 / 3.0;
    int depth = 0;  // 0 = automatic
    double arc_start = 0.0;
    double arc_length = kTwoPi;
};

using Generator = std::variant<FinitePoints, ClosedArcs, GeometricTail, PowerTail, LogTail, Cantor>;

std::string generator_name(const Generator& g);

/// Gap list materialised from a generator (finite representation).
struct GapList {
    std::vector<double> gaps;     // normalised, sorted non-increasing, all > 0
    double direct_measure = 0.0;  // |E| of the finite representation
};

GapList gaps_from_generator(const Generator& generator);

/// A closed arc of T: the angles [start, start + length], start in [0, 2*pi).
struct Arc {
    double start = 0.0;
    double length = 0.0;
    double end() const { return start + length; }
};

/// Exact description of the complementary gaps of an infinite family.
/// count_above(s) is the number of gaps longer than s, sum_at_or_below(s) the
/// total length of the others (normalised lengths).
class GapModel {
public:
    virtual ~GapModel() = default;
    virtual double count_above(double s) const = 0;
    virtual double sum_at_or_below(double s) const = 0;
    virtual double direct_measure() const { return 0.0; }
};

/// A closed subset of the unit circle.
///
/// The set is always held as a finite union of closed arcs (points are arcs of
/// length zero). Infinite families are truncated; the truncated region is
/// recorded in truncation_measure() and resolution(). When the family has a
/// closed-form gap sequence, neighbourhood measures are computed from that
/// exact sequence instead of the truncated one.
class ClosedCircularSet {
public:
    static ClosedCircularSet from_generator(const Generator& generator, Metric metric = Metric::Chord);
    static ClosedCircularSet from_arcs(std::vector<Arc> arcs, Metric metric = Metric::Chord,
                                       double resolution = 0.0);
    static ClosedCircularSet full_circle(Metric metric = Metric::Chord);

    const std::vector<Arc>& arcs() const { return arcs_; }
    const std::vector<double>& gaps() const { return gaps_; }
    double direct_measure() const { return direct_measure_; }
    double truncation_measure() const { return truncation_measure_; }
    /// Normalised length scale below which the finite representation stops
    /// describing the intended set; 0 when the representation is exact.
    double resolution() const { return resolution_; }
    Metric metric() const { return metric_; }
    const std::optional<Generator>& generator() const { return generator_; }
    bool has_exact_spectrum() const { return model_ != nullptr || resolution_ == 0.0; }
    bool is_full_circle() const { return arcs_.size() == 1 && arcs_.front().length >= kTwoPi; }
    std::size_t point_count() const { return arcs_.size(); }

    ClosedCircularSet with_metric(Metric metric) const;
    /// Same arcs, no closed-form gap model (what an explicit enumeration sees).
    ClosedCircularSet truncated() const;
    ClosedCircularSet rotated(double sigma) const;
    /// E intersected with the closed chordal ball of radius r about t.
    std::optional<ClosedCircularSet> restrict_to_ball(CirclePoint t, double r) const;
    static ClosedCircularSet unite(const ClosedCircularSet& a, const ClosedCircularSet& b);

    bool contains(double angle) const;
    /// Closest point of E to the given angle; ties go to the smaller angle.
    CirclePoint nearest(double angle) const;

    /// Gap statistics at cover length s: the number of gaps longer than s,
    /// the total length of the others, and the direct measure |E|.
    struct GapSplit {
        double count = 0.0;
        double tail = 0.0;
        double direct = 0.0;
    };
    GapSplit gap_split(double s) const;

private:
    ClosedCircularSet() = default;
    void finalize();

    std::vector<Arc> arcs_;
    std::vector<double> gaps_;
    std::vector<double> gaps_tail_sum_;  // gaps_tail_sum_[j] = sum_{i>=j} gaps_[i]
    double direct_measure_ = 0.0;
    double truncation_measure_ = 0.0;
    double resolution_ = 0.0;
    Metric metric_ = Metric::Chord;
    std::optional<Generator> generator_;
    std::shared_ptr<const GapModel> model_;
};

/// Euclidean distance from z (|z| <= 1) to E.
double distance_to_set(std::complex<double> z, const ClosedCircularSet& E);

/// The point of E nearest to z; ties resolved by the smaller angle.
CirclePoint nearest_point(std::complex<double> z, const ClosedCircularSet& E);

/// Normalised length s(x) of a gap covered by E_x from its two ends together;
/// a gap is swallowed whole once its length is <= s(x).
/// Chord: (2/pi) arcsin(x/2). Arc: x/pi. Clamped to [0, 1].
double cover_length(double x, Metric metric);

/// |E_x| from the complementary gaps.
double neighborhood_measure(const ClosedCircularSet& E, double x);

/// |E_x| by explicit union of the x-neighbourhoods of every retained arc.
double neighborhood_measure_oracle(const ClosedCircularSet& E, double x);

// Type ----------------------------------------------------------------------

enum class TypeMethod { Analytic, LogLogFit };

struct TypeEstimate {
    double beta = 0.0;
    TypeMethod method = TypeMethod::Analytic;
    std::pair<double, double> fit_window{0.0, 0.0};  // (x_min, x_max)
    double residual = 0.0;

    bool off_set() const { return beta == std::numeric_limits<double>::infinity(); }
};

/// Dyadic window x_k = 2^{-k}, k_lo <= k <= k_hi.
struct FitWindow {
    int k_lo = 4;
    int k_hi = 20;
};

/// Window used by type_beta when none is given: deep (k in [30, 120]) for
/// exactly known gap sequences, resolution-limited otherwise.
FitWindow default_fit_window(const ClosedCircularSet& E);

TypeEstimate type_beta(const ClosedCircularSet& E, TypeMethod method,
                       std::optional<FitWindow> window = std::nullopt);

enum class Verdict { Converges, Diverges, Indeterminate };

std::string to_string(Verdict v);

struct IntegralResult {
    double value = 0.0;   // +inf when divergent
    Verdict verdict = Verdict::Indeterminate;
    double local_exponent = 0.0;  // fitted power of the integrand at 0
    double quadrature_error = 0.0;
};

/// I(beta, E) = int_0^pi |E_x| x^{-beta-1} dx.
IntegralResult integral_I(double beta, const ClosedCircularSet& E, double x_floor = 1e-6);

/// beta(E cap closed ball(t, delta)) for each delta; +inf when the ball misses E.
std::vector<TypeEstimate> local_type(const ClosedCircularSet& E, CirclePoint t,
                                     const std::vector<double>& deltas);

}  // namespace blaschke
