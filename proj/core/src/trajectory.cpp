#include "ctdde/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "ctdde/errors.hpp"
#include "ctdde/util.hpp"

namespace ctdde {

Trajectory::Trajectory(int start, GridSpec grid) : start_(start), grid_(grid) {
  if (grid.q < 2) throw TrajectoryError("grid requires Q >= 2");
}

void Trajectory::append_piece(std::vector<double> values, Provenance prov) {
  if (static_cast<int>(values.size()) != grid_.q) {
    throw TrajectoryError("piece must hold exactly Q values");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw TrajectoryError("non-finite value in piece " + std::to_string(end()));
    }
  }
  pieces_.push_back(Piece{std::move(values), prov});
}

const Trajectory::Piece& Trajectory::piece_at(double t) const {
  double fl = std::floor(t);
  int n = static_cast<int>(fl);
  if (t < start_ || n >= end()) {
    throw TrajectoryError("t = " + util::fmt_double(t) + " outside covered range [" +
                          std::to_string(start_) + ", " + std::to_string(end()) + ")");
  }
  return pieces_[static_cast<std::size_t>(n - start_)];
}

double Trajectory::value_at(double t) const {
  const Piece& p = piece_at(t);
  const int q = grid_.q;
  double n = std::floor(t);
  double offset = t - n;  // in [0, 1)

  // Exact hit on a stored abscissa n + j/Q.
  double jr = std::round(offset * q);
  if (jr < q) {
    double reconstructed = n + jr / q;
    if (reconstructed == t) return p.values[static_cast<std::size_t>(jr)];
  }

  int j = static_cast<int>(std::floor(offset * q));
  if (j > q - 2) j = q - 2;  // extrapolate the tail from the last two samples
  double tj = n + static_cast<double>(j) / q;
  double slope = (p.values[static_cast<std::size_t>(j + 1)] -
                  p.values[static_cast<std::size_t>(j)]) *
                 q;
  return p.values[static_cast<std::size_t>(j)] + (t - tj) * slope;
}

void Trajectory::collect_extremes(double c, double d, double& mn, double& mx) const {
  const int q = grid_.q;
  int first_piece = static_cast<int>(std::floor(c));
  int last_piece = std::min(static_cast<int>(std::floor(d)), end() - 1);
  for (int n = first_piece; n <= last_piece; ++n) {
    for (int j = 0; j < q; ++j) {
      double a = abscissa(n, j);
      if (a < c || a > d) continue;
      double v = pieces_[static_cast<std::size_t>(n - start_)].values[static_cast<std::size_t>(j)];
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
}

double Trajectory::seg_min(double c, double d) const {
  if (!(c < d) || c < start_ || d > end()) {
    throw TrajectoryError("invalid segment [" + util::fmt_double(c) + ", " +
                          util::fmt_double(d) + "]");
  }
  double mn = value_at(c), mx = mn;
  if (d < end()) {
    double v = value_at(d);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  collect_extremes(c, d, mn, mx);
  return mn;
}

double Trajectory::seg_max(double c, double d) const {
  if (!(c < d) || c < start_ || d > end()) {
    throw TrajectoryError("invalid segment [" + util::fmt_double(c) + ", " +
                          util::fmt_double(d) + "]");
  }
  double mn = value_at(c), mx = mn;
  if (d < end()) {
    double v = value_at(d);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  collect_extremes(c, d, mn, mx);
  return mx;
}

std::vector<SignEvent> Trajectory::sign_events(double from, double to) const {
  if (from < start_ || to > end() || from > to) {
    throw TrajectoryError("sign_events range not covered");
  }
  std::vector<SignEvent> events;
  const int q = grid_.q;
  const int total = piece_count() * q;
  auto value_of = [&](int idx) {
    return pieces_[static_cast<std::size_t>(idx / q)].values[static_cast<std::size_t>(idx % q)];
  };
  auto abscissa_of = [&](int idx) { return abscissa(start_ + idx / q, idx % q); };
  for (int i = 0; i + 1 < total; ++i) {
    double tl = abscissa_of(i), tr = abscissa_of(i + 1);
    if (tl < from || tr > to) continue;
    bool left_neg = value_of(i) < 0.0;
    bool right_neg = value_of(i + 1) < 0.0;
    if (left_neg != right_neg) events.push_back(SignEvent{tl, tr});
  }
  return events;
}

double Trajectory::piece_min(int n) const {
  const auto& vals = pieces_.at(static_cast<std::size_t>(n - start_)).values;
  return *std::min_element(vals.begin(), vals.end());
}

double Trajectory::piece_max(int n) const {
  const auto& vals = pieces_.at(static_cast<std::size_t>(n - start_)).values;
  return *std::max_element(vals.begin(), vals.end());
}

double Trajectory::sample(int n, int j) const {
  return pieces_.at(static_cast<std::size_t>(n - start_)).values.at(static_cast<std::size_t>(j));
}

double Trajectory::abscissa(int n, int j) const {
  return n + static_cast<double>(j) / grid_.q;
}

Provenance Trajectory::provenance(int n) const {
  return pieces_.at(static_cast<std::size_t>(n - start_)).prov;
}

Trajectory Trajectory::from_expression(const Expression& e, int start, int end, GridSpec grid,
                                       Provenance prov) {
  if (end <= start) throw TrajectoryError("empty range for from_expression");
  Trajectory traj(start, grid);
  for (int n = start; n < end; ++n) {
    std::vector<double> values(static_cast<std::size_t>(grid.q));
    for (int j = 0; j < grid.q; ++j) {
      values[static_cast<std::size_t>(j)] = e.eval(traj.abscissa(n, j));
    }
    traj.append_piece(std::move(values), prov);
  }
  return traj;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t,value,piece_index,provenance\n";
  for (int n = start_; n < end(); ++n) {
    const auto& p = pieces_[static_cast<std::size_t>(n - start_)];
    for (int j = 0; j < grid_.q; ++j) {
      os << util::fmt_double(abscissa(n, j)) << ',' << util::fmt_double(p.values[static_cast<std::size_t>(j)])
         << ',' << n << ',' << (p.prov == Provenance::History ? "history" : "computed") << '\n';
    }
  }
}

}  // namespace ctdde
