#pragma once

// Closed-form gap sequences for the infinite example families.

#include "blaschke/circle_geometry.hpp"

namespace blaschke::detail {

enum class TailKind { Geometric, Power, Log };

/// phi_n = c * sum_{k>=n} f(k) with f(k) = 2^{-k}, k^{-gamma} or 1/(k log^2 k).
/// phi_{first} = 1 radian in every family; the set is {e^{i phi_n}} u {1}.
class TailFamily {
public:
    TailFamily(TailKind kind, double gamma = 2.0);

    TailKind kind() const { return kind_; }
    double first_index() const { return n0_; }
    /// Gap phi_n - phi_{n+1} in radians.
    double gap(double n) const;
    /// phi_n in radians.
    double phi(double n) const;
    /// Largest n >= first_index with gap(n) > s_rad, or first_index - 1.
    double last_gap_above(double s_rad) const;
    /// Number of retained points giving gaps >= threshold (normalised).
    std::size_t default_depth(double threshold) const;

private:
    double raw_tail(double n) const;  // sum_{k>=n} f(k)
    double raw_term(double n) const;

    TailKind kind_;
    double gamma_;
    double n0_;
    double c_;
};

class TailGapModel final : public GapModel {
public:
    explicit TailGapModel(TailFamily family) : family_(family) {}
    double count_above(double s) const override;
    double sum_at_or_below(double s) const override;

private:
    TailFamily family_;
};

/// Gaps of the full (untruncated) middle-omega Cantor set on an arc of
/// normalised length arc_fraction: level j has 2^{j-1} gaps of length
/// arc_fraction * omega * ((1-omega)/2)^{j-1}; plus the complementary gap
/// 1 - arc_fraction when the arc is proper.
class CantorGapModel final : public GapModel {
public:
    CantorGapModel(double omega, double arc_fraction) : omega_(omega), arc_(arc_fraction) {}
    double count_above(double s) const override;
    double sum_at_or_below(double s) const override;

private:
    int levels_above(double s) const;
    double omega_;
    double arc_;
};

}  // namespace blaschke::detail
