#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace cergm {

class SubgraphSpec;

/// Multipodal (block) graphon: [0,1] is cut into K consecutive intervals of
/// lengths c_0..c_{K-1}; h is constant (values(i,j)) on each product cell.
class BlockGraphon {
 public:
  /// Validates: c_i >= 0, sum c = 1 within 1e-12, values square, symmetric
  /// and inside [0,1] (entries within 1e-12 of the box are clamped).
  BlockGraphon(Eigen::VectorXd fractions, Eigen::MatrixXd values);

  int blocks() const { return static_cast<int>(fractions_.size()); }
  const Eigen::VectorXd& fractions() const { return fractions_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double fraction(int i) const { return fractions_(i); }
  double value(int i, int j) const { return values_(i, j); }

  /// Drop empty blocks, merge blocks with identical rows (within
  /// merge_tolerance), sort by (fraction, degree, diagonal value).
  BlockGraphon canonical(double merge_tolerance = kMergeTolerance) const;

  /// h(x, y) for a point of the unit square.
  double evaluate(double x, double y) const;

  static constexpr double kMergeTolerance = 1e-10;

 private:
  Eigen::VectorXd fractions_;
  Eigen::MatrixXd values_;
};

void to_json(nlohmann::json& j, const BlockGraphon& h);
BlockGraphon graphon_from_json(const nlohmann::json& j);

/// I(x) = x log x + (1-x) log(1-x), with I(0) = I(1) = 0.
double i_fun(double x);
/// I'(x) = log(x / (1-x)) on (0, 1).
double i_fun_deriv(double x);

struct EntropyReport {
  double entropy_integral;
  double edge_density;
};

BlockGraphon uniform(double epsilon);
/// Complete graph on a block of measure sqrt(epsilon), empty elsewhere.
BlockGraphon clique(double epsilon);
/// Complement of a clique: empty only on a block of measure sqrt(1-epsilon).
BlockGraphon anticlique(double epsilon);
/// Two halves; epsilon - r inside each half and epsilon + r across, where
/// r = (epsilon^3 - tau)^{1/3}. Its triangle density is tau.
BlockGraphon checkerboard(double epsilon, double tau);

double edge_density(const BlockGraphon& h);
double entropy_integral(const BlockGraphon& h);
EntropyReport entropy_report(const BlockGraphon& h);

/// beta2 * t(H, h) - 1/2 * entropy_integral(h).
double objective(const BlockGraphon& h, const SubgraphSpec& H, double beta2);

/// g_i = sum_j c_j h_ij, the degree of any point of block i.
Eigen::VectorXd degree_profile(const BlockGraphon& h);

/// Largest two-star density at edge density epsilon.
double max_two_star_density(double epsilon);
/// Largest triangle density at edge density epsilon (epsilon^{3/2}).
double max_triangle_density(double epsilon);

BlockGraphon complement(const BlockGraphon& h);

/// Minimum over block orders of the L1 distance between the two step
/// functions laid out on [0,1]^2. Zero iff equal up to relabeling.
double block_distance(const BlockGraphon& a, const BlockGraphon& b);

/// Writes "x,y,h" rows at the centres of a resolution x resolution grid.
void write_grid_csv(std::ostream& out, const BlockGraphon& h, int resolution);

}  // namespace cergm
