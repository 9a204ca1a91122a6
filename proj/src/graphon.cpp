#include "cergm/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "cergm/errors.hpp"
#include "cergm/subgraph.hpp"

namespace cergm {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kBoxSlack = 1e-12;

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

BlockGraphon::BlockGraphon(Eigen::VectorXd fractions, Eigen::MatrixXd values)
    : fractions_(std::move(fractions)), values_(std::move(values)) {
  const auto K = fractions_.size();
  if (K < 1) throw DomainError("graphon: need at least one block");
  if (values_.rows() != K || values_.cols() != K) throw DomainError("graphon: value matrix must be K x K");
  for (Eigen::Index i = 0; i < K; ++i) {
    if (!(fractions_(i) >= 0.0)) throw DomainError("graphon: block fractions must be nonnegative");
  }
  if (std::abs(fractions_.sum() - 1.0) > kSumTolerance) throw DomainError("graphon: block fractions must sum to 1");
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      double& v = values_(i, j);
      if (!(v >= -kBoxSlack && v <= 1.0 + kBoxSlack)) throw DomainError("graphon: values must lie in [0, 1]");
      if (std::abs(v - values_(j, i)) > kBoxSlack) throw DomainError("graphon: value matrix must be symmetric");
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  values_ = 0.5 * (values_ + values_.transpose()).eval();
}

BlockGraphon BlockGraphon::canonical(double merge_tolerance) const {
  std::vector<double> c;
  std::vector<int> keep;
  for (int i = 0; i < blocks(); ++i) {
    if (fractions_(i) > 1e-14) keep.push_back(i);
  }
  if (keep.empty()) throw DomainError("graphon: all blocks empty");
  Eigen::VectorXd frac(keep.size());
  Eigen::MatrixXd vals(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    frac(a) = fractions_(keep[a]);
    for (std::size_t b = 0; b < keep.size(); ++b) vals(a, b) = values_(keep[a], keep[b]);
  }
  frac /= frac.sum();

  // Merge blocks whose rows agree; the merged diagonal is the measure-weighted
  // average over the 2x2 sub-block so the edge density is unchanged.
  bool merged = true;
  while (merged && frac.size() > 1) {
    merged = false;
    const auto K = frac.size();
    for (Eigen::Index i = 0; i < K && !merged; ++i) {
      for (Eigen::Index j = i + 1; j < K && !merged; ++j) {
        if ((vals.row(i) - vals.row(j)).cwiseAbs().maxCoeff() > merge_tolerance) continue;
        const double ci = frac(i), cj = frac(j), cs = ci + cj;
        Eigen::MatrixXd next = vals;
        for (Eigen::Index k = 0; k < K; ++k) {
          next(i, k) = next(k, i) = (ci * vals(i, k) + cj * vals(j, k)) / cs;
        }
        next(i, i) = (ci * ci * vals(i, i) + 2 * ci * cj * vals(i, j) + cj * cj * vals(j, j)) / (cs * cs);
        std::vector<Eigen::Index> rest;
        for (Eigen::Index k = 0; k < K; ++k)
          if (k != j) rest.push_back(k);
        Eigen::VectorXd f2(K - 1);
        Eigen::MatrixXd v2(K - 1, K - 1);
        for (std::size_t a = 0; a < rest.size(); ++a) {
          f2(a) = (rest[a] == i) ? cs : frac(rest[a]);
          for (std::size_t b = 0; b < rest.size(); ++b) v2(a, b) = next(rest[a], rest[b]);
        }
        frac = f2;
        vals = v2;
        merged = true;
      }
    }
  }

  const Eigen::VectorXd degree = vals * frac;
  std::vector<int> order(frac.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (frac(a) != frac(b)) return frac(a) < frac(b);
    if (degree(a) != degree(b)) return degree(a) < degree(b);
    return vals(a, a) < vals(b, b);
  });
  Eigen::VectorXd f3(frac.size());
  Eigen::MatrixXd v3(frac.size(), frac.size());
  for (std::size_t a = 0; a < order.size(); ++a) {
    f3(a) = frac(order[a]);
    for (std::size_t b = 0; b < order.size(); ++b) v3(a, b) = vals(order[a], order[b]);
  }
  return BlockGraphon(f3, v3);
}

double BlockGraphon::evaluate(double x, double y) const {
  auto locate = [&](double t) {
    double acc = 0.0;
    for (int i = 0; i < blocks(); ++i) {
      acc += fractions_(i);
      if (t < acc) return i;
    }
    return blocks() - 1;
  };
  return values_(locate(x), locate(y));
}

void to_json(nlohmann::json& j, const BlockGraphon& h) {
  std::vector<double> c(h.fractions().data(), h.fractions().data() + h.blocks());
  std::vector<std::vector<double>> rows(h.blocks(), std::vector<double>(h.blocks()));
  for (int i = 0; i < h.blocks(); ++i)
    for (int k = 0; k < h.blocks(); ++k) rows[i][k] = h.value(i, k);
  j = nlohmann::json{{"c", c}, {"h", rows}};
}

BlockGraphon graphon_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("c") || !j.contains("h")) {
    throw DomainError("graphon: JSON must have fields \"c\" and \"h\"");
  }
  const auto c = j.at("c").get<std::vector<double>>();
  const auto rows = j.at("h").get<std::vector<std::vector<double>>>();
  const auto K = static_cast<Eigen::Index>(c.size());
  if (static_cast<Eigen::Index>(rows.size()) != K) throw DomainError("graphon: h must have one row per block");
  Eigen::VectorXd frac(K);
  Eigen::MatrixXd vals(K, K);
  for (Eigen::Index i = 0; i < K; ++i) {
    frac(i) = c[i];
    if (static_cast<Eigen::Index>(rows[i].size()) != K) throw DomainError("graphon: h must be square");
    for (Eigen::Index k = 0; k < K; ++k) vals(i, k) = rows[i][k];
  }
  return BlockGraphon(frac, vals);
}

double i_fun(double x) {
  require_unit(x, "I(x): x");
  double out = 0.0;
  if (x > 0.0) out += x * std::log(x);
  if (x < 1.0) out += (1.0 - x) * std::log1p(-x);
  return out;
}

double i_fun_deriv(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("I'(x): x must lie in (0, 1)");
  return std::log(x) - std::log1p(-x);
}

BlockGraphon uniform(double epsilon) {
  require_unit(epsilon, "epsilon");
  return BlockGraphon(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Constant(1, 1, epsilon));
}

BlockGraphon clique(double epsilon) {
  require_unit(epsilon, "epsilon");
  const double s = std::sqrt(epsilon);
  Eigen::Vector2d c(s, 1.0 - s);
  Eigen::Matrix2d h;
  h << 1.0, 0.0, 0.0, 0.0;
  return BlockGraphon(c, h);
}

BlockGraphon anticlique(double epsilon) {
  require_unit(epsilon, "epsilon");
  const double s = std::sqrt(1.0 - epsilon);
  Eigen::Vector2d c(1.0 - s, s);
  Eigen::Matrix2d h;
  h << 1.0, 1.0, 1.0, 0.0;
  return BlockGraphon(c, h);
}

BlockGraphon checkerboard(double epsilon, double tau) {
  require_unit(epsilon, "epsilon");
  const double top = epsilon * epsilon * epsilon;
  if (!(tau >= 0.0 && tau <= top + 1e-15)) throw DomainError("checkerboard: tau must lie in [0, epsilon^3]");
  const double r = std::cbrt(std::max(0.0, top - tau));
  const double inside = epsilon - r;
  const double across = epsilon + r;
  if (inside < -kBoxSlack || across > 1.0 + kBoxSlack) {
    throw DomainError("checkerboard: values epsilon +- (epsilon^3 - tau)^{1/3} leave [0, 1]");
  }
  Eigen::Vector2d c(0.5, 0.5);
  Eigen::Matrix2d h;
  h << inside, across, across, inside;
  return BlockGraphon(c, h);
}

double edge_density(const BlockGraphon& h) {
  return h.fractions().dot(h.values() * h.fractions());
}

double entropy_integral(const BlockGraphon& h) {
  double total = 0.0;
  for (int i = 0; i < h.blocks(); ++i)
    for (int j = 0; j < h.blocks(); ++j) total += h.fraction(i) * h.fraction(j) * i_fun(h.value(i, j));
  return total;
}

EntropyReport entropy_report(const BlockGraphon& h) { return {entropy_integral(h), edge_density(h)}; }

double objective(const BlockGraphon& h, const SubgraphSpec& H, double beta2) {
  const double entropy = entropy_integral(h);
  if (beta2 == 0.0) return -0.5 * entropy;
  return beta2 * hom_density_blocks(H, h) - 0.5 * entropy;
}

Eigen::VectorXd degree_profile(const BlockGraphon& h) { return h.values() * h.fractions(); }

double max_two_star_density(double epsilon) {
  require_unit(epsilon, "epsilon");
  if (epsilon <= 0.5) return 2.0 * epsilon + std::pow(1.0 - epsilon, 1.5) - 1.0;
  return std::pow(epsilon, 1.5);
}

double max_triangle_density(double epsilon) {
  require_unit(epsilon, "epsilon");
  return std::pow(epsilon, 1.5);
}

BlockGraphon complement(const BlockGraphon& h) {
  return BlockGraphon(h.fractions(), Eigen::MatrixXd::Ones(h.blocks(), h.blocks()) - h.values());
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// L1 distance between two step functions with the given block orders.
double layout_distance(const BlockGraphon& a, const std::vector<int>& pa, const BlockGraphon& b,
                       const std::vector<int>& pb) {
  struct Cell {
    double width;
    int block_a;
    int block_b;
  };
  std::vector<Cell> cells;
  std::size_t ia = 0, ib = 0;
  double end_a = a.fraction(pa[0]), end_b = b.fraction(pb[0]), pos = 0.0;
  while (ia < pa.size() && ib < pb.size()) {
    const double next = std::min(end_a, end_b);
    if (next > pos) cells.push_back({next - pos, pa[ia], pb[ib]});
    pos = next;
    if (end_a <= next) {
      if (++ia < pa.size()) end_a += a.fraction(pa[ia]);
    }
    if (end_b <= next) {
      if (++ib < pb.size()) end_b += b.fraction(pb[ib]);
    }
  }
  double total = 0.0;
  for (const auto& x : cells)
    for (const auto& y : cells)
      total += x.width * y.width * std::abs(a.value(x.block_a, y.block_a) - b.value(x.block_b, y.block_b));
  return total;
}

}  // namespace

double block_distance(const BlockGraphon& a, const BlockGraphon& b) {
  if (factorial(a.blocks()) * factorial(b.blocks()) > 1e6) {
    throw BudgetError("block_distance: too many block orders to enumerate");
  }
  std::vector<int> pa(a.blocks()), pb(b.blocks());
  std::iota(pa.begin(), pa.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    std::iota(pb.begin(), pb.end(), 0);
    do {
      best = std::min(best, layout_distance(a, pa, b, pb));
    } while (std::next_permutation(pb.begin(), pb.end()));
  } while (std::next_permutation(pa.begin(), pa.end()));
  return best;
}

void write_grid_csv(std::ostream& out, const BlockGraphon& h, int resolution) {
  if (resolution < 1) throw DomainError("grid resolution must be positive");
  out << "x,y,h\n";
  const auto precision = out.precision(17);
  for (int i = 0; i < resolution; ++i) {
    const double x = (i + 0.5) / resolution;
    for (int j = 0; j < resolution; ++j) {
      const double y = (j + 0.5) / resolution;
      out << x << ',' << y << ',' << h.evaluate(x, y) << '\n';
    }
  }
  out.precision(precision);
}

}  // namespace cergm
