#include "manet/traffic/cbr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace manet::traffic {

void CbrConfig::validate() const {
  if (pair_count == 0) throw std::invalid_argument("CbrConfig: pair_count must be positive");
  if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("CbrConfig: rate must be > 0");
  if (packet_size == 0) throw std::invalid_argument("CbrConfig: packet_size must be > 0");
  if (start_jitter && !(*start_jitter >= 0.0)) throw std::invalid_argument("CbrConfig: start_jitter < 0");
}

std::vector<FlowPair> generate_pairs(std::size_t n_nodes, const CbrConfig& cfg,
                                     sim::RngStream& rng) {
  cfg.validate();
  if (n_nodes < 2) throw std::invalid_argument("generate_pairs: need at least two nodes");
  const std::uint64_t universe = static_cast<std::uint64_t>(n_nodes) * (n_nodes - 1);
  if (cfg.pair_count > universe) {
    throw std::invalid_argument("generate_pairs: more pairs requested than exist");
  }
  // Floyd's sampling: a uniform k-subset of [0, universe) in k draws.
  std::vector<std::uint64_t> picked;
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t j = universe - cfg.pair_count; j < universe; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t v = seen.contains(t) ? j : t;
    seen.insert(v);
    picked.push_back(v);
  }
  std::vector<FlowPair> out;
  out.reserve(picked.size());
  const std::uint64_t m = n_nodes - 1;
  for (std::uint64_t idx : picked) {
    const auto src = static_cast<NodeId>(idx / m);
    const auto r = static_cast<NodeId>(idx % m);
    out.push_back(FlowPair{src, r < src ? r : r + 1});
  }
  return out;
}

std::vector<SimTime> draw_start_offsets(std::size_t pairs, const CbrConfig& cfg,
                                        sim::RngStream& rng) {
  cfg.validate();
  std::vector<SimTime> out(pairs);
  const double bound = cfg.max_start_offset();
  for (auto& o : out) o = rng.uniform() * bound;
  return out;
}

std::vector<CbrSend> schedule_cbr(const std::vector<FlowPair>& pairs,
                                  const std::vector<SimTime>& offsets, const CbrConfig& cfg,
                                  SimTime duration) {
  cfg.validate();
  if (!(duration > 0.0)) throw std::invalid_argument("schedule_cbr: duration must be > 0");
  if (offsets.size() != pairs.size()) throw std::invalid_argument("schedule_cbr: offsets/pairs mismatch");

  std::vector<CbrSend> sends;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (offsets[p] > duration) continue;
    // The epsilon absorbs representation error in (duration - offset) * rate.
    const auto last = static_cast<std::uint64_t>(std::floor((duration - offsets[p]) * cfg.rate + 1e-9));
    for (std::uint64_t k = 0; k <= last; ++k) {
      const SimTime t = offsets[p] + static_cast<double>(k) / cfg.rate;
      sends.push_back(CbrSend{std::min(t, duration), p, pairs[p]});
    }
  }
  std::stable_sort(sends.begin(), sends.end(), [](const CbrSend& a, const CbrSend& b) {
    return a.at < b.at || (a.at == b.at && a.pair < b.pair);
  });
  return sends;
}

}  // namespace manet::traffic
