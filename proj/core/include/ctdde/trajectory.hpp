#pragma once

#include <iosfwd>
#include <vector>

#include "ctdde/expr.hpp"

namespace ctdde {

/// Sampling density: Q samples per unit interval, step 1/Q.
struct GridSpec {
  int q = 64;
};

enum class Provenance { History, Computed };

struct SignEvent {
  double t_left;
  double t_right;
};

/// Piecewise solution store. Piece n covers the half-open interval
/// [n, n+1) with Q stored values at abscissas n + j/Q, j = 0..Q-1. The
/// value at an integer belongs to the piece starting there; left limits
/// live in the previous piece, so solutions may jump at integers.
///
/// Pieces are appended during simulation and immutable afterwards; all
/// read operations are pure.
class Trajectory {
 public:
  Trajectory(int start, GridSpec grid);

  /// Values must have exactly Q entries, all finite.
  void append_piece(std::vector<double> values, Provenance prov);

  int start() const { return start_; }
  /// One past the last covered piece: coverage is [start, end).
  int end() const { return start_ + static_cast<int>(pieces_.size()); }
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  const GridSpec& grid() const { return grid_; }

  /// Stored abscissas return the stored value exactly. Elsewhere the value
  /// is linearly interpolated between the two neighboring samples of the
  /// same piece; past the last sample of a piece it is extrapolated from
  /// that piece's last two samples. Interpolation never crosses an integer
  /// boundary.
  double value_at(double t) const;

  /// Extrema of value_at over the stored abscissas in [c, d] plus the
  /// endpoint values at c and d. Requires start <= c < d <= end.
  double seg_min(double c, double d) const;
  double seg_max(double c, double d) const;

  /// Pairs of adjacent grid abscissas in [from, to] holding strictly
  /// opposite signs; zero counts as nonnegative.
  std::vector<SignEvent> sign_events(double from, double to) const;

  /// Min/max of the stored samples of piece [n, n+1).
  double piece_min(int n) const;
  double piece_max(int n) const;

  double sample(int n, int j) const;
  double abscissa(int n, int j) const;
  Provenance provenance(int n) const;

  /// Samples `e` on [start, end) at the grid resolution.
  static Trajectory from_expression(const Expression& e, int start, int end, GridSpec grid,
                                    Provenance prov = Provenance::History);

  /// CSV rows `t,value,piece_index,provenance` at full float precision.
  void write_csv(std::ostream& os) const;

 private:
  struct Piece {
    std::vector<double> values;
    Provenance prov;
  };

  const Piece& piece_at(double t) const;
  void collect_extremes(double c, double d, double& mn, double& mx) const;

  int start_;
  GridSpec grid_;
  std::vector<Piece> pieces_;
};

}  // namespace ctdde
