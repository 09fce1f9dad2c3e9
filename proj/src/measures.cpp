#include "commlb/measures.hpp"

#include "commlb/errors.hpp"
#include "commlb/pseudotranscript.hpp"

namespace commlb {

namespace {

void check_joint(const RationalGrid& joint) {
  if (joint.rows() == 0 || joint.cols() == 0) throw ValidationError("joint distribution has an empty side");
  Rational sum = 0;
  for (const Rational& p : joint.data()) {
    if (sgn(p) < 0) throw ValidationError("joint distribution has a negative entry " + to_string(p));
    sum += p;
  }
  if (sgn(sum) == 0) throw ValidationError("joint distribution has no mass");
  if (sum != 1) throw ValidationError("joint distribution sums to " + to_string(sum) + ", not 1");
}

InfoValue info_of(Rational argument) {
  InfoValue v;
  v.bits = log2_of(argument);
  v.exact_argument = std::move(argument);
  return v;
}

}  // namespace

Channel::Channel(RationalGrid probs) : probs_(std::move(probs)) {
  for (std::size_t a = 0; a < probs_.rows(); ++a) {
    Rational sum = 0;
    for (std::size_t b = 0; b < probs_.cols(); ++b) {
      if (sgn(probs_.at(a, b)) < 0) throw ValidationError("channel row " + std::to_string(a) + " has a negative entry");
      sum += probs_.at(a, b);
    }
    if (sum != 1)
      throw ValidationError("channel row " + std::to_string(a) + " sums to " + to_string(sum) + ", not 1");
  }
}

InfoValue renyi_inf_cost(const Channel& ch) {
  Rational sum = 0;
  for (std::size_t b = 0; b < ch.outcomes(); ++b) {
    Rational best = 0;
    for (std::size_t a = 0; a < ch.inputs(); ++a)
      if (ch.at(a, b) > best) best = ch.at(a, b);
    sum += best;
  }
  return info_of(std::move(sum));
}

InfoValue renyi_inf_mi(const RationalGrid& joint) {
  check_joint(joint);
  std::vector<Rational> pa(joint.rows(), Rational(0));
  for (std::size_t a = 0; a < joint.rows(); ++a)
    for (std::size_t b = 0; b < joint.cols(); ++b) pa[a] += joint.at(a, b);
  Rational sum = 0;
  for (std::size_t b = 0; b < joint.cols(); ++b) {
    Rational best = 0;
    for (std::size_t a = 0; a < joint.rows(); ++a) {
      if (sgn(pa[a]) == 0) continue;
      Rational cond = joint.at(a, b) / pa[a];
      if (cond > best) best = std::move(cond);
    }
    sum += best;
  }
  return info_of(std::move(sum));
}

double shannon_mi(const RationalGrid& joint) {
  check_joint(joint);
  std::vector<Rational> pa(joint.rows(), Rational(0));
  std::vector<Rational> pb(joint.cols(), Rational(0));
  for (std::size_t a = 0; a < joint.rows(); ++a)
    for (std::size_t b = 0; b < joint.cols(); ++b) {
      pa[a] += joint.at(a, b);
      pb[b] += joint.at(a, b);
    }
  double total = 0.0;
  for (std::size_t a = 0; a < joint.rows(); ++a)
    for (std::size_t b = 0; b < joint.cols(); ++b) {
      const Rational& p = joint.at(a, b);
      if (sgn(p) == 0) continue;
      total += to_double(p) * log2_of(p / (pa[a] * pb[b]));
    }
  return total;
}

double external_cost(const Pseudotranscript& q, const InputDistribution& mu) {
  if (mu.x_size() != q.x_size() || mu.y_size() != q.y_size())
    throw ValidationError("input distribution shape does not match the pseudotranscript");
  RationalGrid joint(q.x_size() * q.y_size(), q.size(), Rational(0));
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t x = 0; x < q.x_size(); ++x)
      for (std::size_t y = 0; y < q.y_size(); ++y) joint.at(x * q.y_size() + y, i) = mu.at(x, y) * q.prob(i, x, y);
  return shannon_mi(joint);
}

double internal_cost(const Pseudotranscript& q, const InputDistribution& mu) {
  if (mu.x_size() != q.x_size() || mu.y_size() != q.y_size())
    throw ValidationError("input distribution shape does not match the pseudotranscript");
  const std::size_t nx = q.x_size();
  const std::size_t ny = q.y_size();
  std::vector<Rational> px(nx, Rational(0));
  std::vector<Rational> py(ny, Rational(0));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += mu.at(x, y);
      py[y] += mu.at(x, y);
    }

  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    // p(q, y) and p(q, x)
    std::vector<Rational> pqy(ny, Rational(0));
    std::vector<Rational> pqx(nx, Rational(0));
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        const Rational joint = mu.at(x, y) * q.prob(i, x, y);
        pqy[y] += joint;
        pqx[x] += joint;
      }
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        const Rational joint = mu.at(x, y) * q.prob(i, x, y);
        if (sgn(joint) == 0) continue;
        const double weight = to_double(joint);
        // p(q|x,y) / p(q|y) and p(q|x,y) / p(q|x)
        total += weight * log2_of(q.prob(i, x, y) * py[y] / pqy[y]);
        total += weight * log2_of(q.prob(i, x, y) * px[x] / pqx[x]);
      }
  }
  return total;
}

}  // namespace commlb
