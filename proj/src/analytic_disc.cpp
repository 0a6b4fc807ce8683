#include "kobalab/analytic_disc.hpp"

#include <algorithm>

#include "kobalab/domains.hpp"
#include "kobalab/error.hpp"

namespace kobalab {

AnalyticDisc::AnalyticDisc(ComplexPoint center, ComplexPoint direction)
    : center_(std::move(center)), direction_(std::move(direction)) {
  require_same_dim(center_, direction_, "AnalyticDisc");
  if (direction_.max_abs() == 0.0) throw Error("AnalyticDisc: direction must be nonzero");
}

ComplexPoint AnalyticDisc::operator()(cplx zeta) const { return center_ + zeta * direction_; }

AnalyticDisc AnalyticDisc::embedded(std::size_t n) const {
  return AnalyticDisc(slice_embed(center_, n), slice_embed(direction_, n));
}

DiscChain::DiscChain(std::vector<ChainLink> links) : links_(std::move(links)) {
  if (links_.empty()) throw Error("DiscChain: at least one link required");
  for (std::size_t i = 1; i < links_.size(); ++i) {
    const ComplexPoint a = links_[i - 1].end();
    const ComplexPoint b = links_[i].start();
    require_same_dim(a, b, "DiscChain");
    const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
    if (distance(a, b) > kStitchTolerance * scale) {
      throw Error("DiscChain: link " + std::to_string(i) + " does not start where link " +
                  std::to_string(i - 1) + " ends");
    }
  }
}

DiscChain DiscChain::concatenated(const DiscChain& next) const {
  std::vector<ChainLink> all = links_;
  all.insert(all.end(), next.links_.begin(), next.links_.end());
  return DiscChain(std::move(all));
}

DiscChain DiscChain::embedded(std::size_t n) const {
  std::vector<ChainLink> out;
  out.reserve(links_.size());
  for (const auto& l : links_) out.push_back({l.disc.embedded(n), l.zeta_in, l.zeta_out});
  return DiscChain(std::move(out));
}

}  // namespace kobalab
