#include "puea/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "puea/errors.hpp"

namespace puea::scenario {

namespace {

constexpr int kMaxTries = 10000;

bool in_region(const Position& p, double region) {
  return p.x >= 0.0 && p.x <= region && p.y >= 0.0 && p.y <= region;
}

bool clears_sus(const Position& p, const std::vector<Position>& sus,
                double min_distance) {
  for (const auto& su : sus) {
    if (distance(p, su) < min_distance) return false;
  }
  return true;
}

}  // namespace

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Topology generate_topology(const ScenarioParams& params, Placement placement,
                           double d, std::uint64_t seed) {
  if (params.n_sus < 2) throw std::invalid_argument("need at least 2 SUs");
  if (!(d > 0.0)) throw std::invalid_argument("PU-attacker distance must be positive");
  if (!(params.region > 0.0)) throw std::invalid_argument("region extent must be positive");

  rng::SplitMix64 g(rng::substream(seed, 0x7090u));

  Topology topo;
  topo.placement = placement;
  topo.d_pu_attacker = d;

  // SUs: uniform in the region, redrawing exact duplicates.
  topo.su_positions.reserve(params.n_sus);
  for (std::size_t i = 0; i < params.n_sus; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxTries)
        throw DataError("could not place distinct SU positions");
      Position p{rng::uniform(g, 0.0, params.region),
                 rng::uniform(g, 0.0, params.region)};
      bool duplicate = false;
      for (const auto& q : topo.su_positions) {
        if (q.x == p.x && q.y == p.y) {
          duplicate = true;
          break;
        }
      }
      if (!duplicate) {
        topo.su_positions.push_back(p);
        break;
      }
    }
  }

  const double min_d = params.channel.min_distance;

  topo.pu.tx_power = params.pt_pu;
  topo.pu.sigma2 = params.sigma2_pu;
  topo.attacker.tx_power = params.pt_attacker;
  topo.attacker.sigma2 = params.sigma2_attacker;

  if (placement == Placement::InsideRegion) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxTries)
        throw DataError("could not place PU inside the region");
      Position p{rng::uniform(g, 0.0, params.region),
                 rng::uniform(g, 0.0, params.region)};
      if (clears_sus(p, topo.su_positions, min_d)) {
        topo.pu.position = p;
        break;
      }
    }
    // Attacker: distance d from the PU in a uniformly random direction,
    // resampled until it lands inside the region.
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kMaxTries)
        throw DataError(
            "could not place attacker inside the region at distance " +
            std::to_string(d));
      const double theta = rng::uniform(g, 0.0, 2.0 * std::numbers::pi);
      Position p{topo.pu.position.x + d * std::cos(theta),
                 topo.pu.position.y + d * std::sin(theta)};
      if (in_region(p, params.region) &&
          clears_sus(p, topo.su_positions, min_d)) {
        topo.attacker.position = p;
        break;
      }
    }
  } else {
    topo.pu.position = params.outside_pu;
    if (!clears_sus(topo.pu.position, topo.su_positions, min_d))
      throw DataError("outside PU position violates the distance floor");
    const Position center{params.region / 2.0, params.region / 2.0};
    const double len = distance(topo.pu.position, center);
    if (!(len > 0.0))
      throw DataError("outside PU position coincides with the region center");
    const double ux = (center.x - topo.pu.position.x) / len;
    const double uy = (center.y - topo.pu.position.y) / len;
    topo.attacker.position = {topo.pu.position.x + d * ux,
                              topo.pu.position.y + d * uy};
    if (!clears_sus(topo.attacker.position, topo.su_positions, min_d))
      throw DataError("outside attacker position violates the distance floor");
  }

  return topo;
}

double received_energy_db(const TransmitterProfile& tx, double r,
                          const ChannelParams& ch, rng::SplitMix64& stream) {
  if (r < ch.min_distance) {
    throw std::invalid_argument("receiver distance " + std::to_string(r) +
                                " below floor " +
                                std::to_string(ch.min_distance));
  }
  constexpr double a = std::numbers::ln10 / 10.0;
  const double beta = std::sqrt(tx.sigma2) * rng::standard_normal(stream);
  const double p_r = tx.tx_power * std::pow(r, -ch.alpha) * std::exp(a * beta);
  return 10.0 * std::log10(p_r);
}

std::vector<SlotReport> simulate_slots(const Topology& topology, Source source,
                                       std::size_t num_slots,
                                       const ChannelParams& ch,
                                       std::uint64_t seed) {
  if (num_slots == 0) throw std::invalid_argument("num_slots must be >= 1");
  const TransmitterProfile& tx =
      source == Source::Pu ? topology.pu : topology.attacker;

  const std::size_t n = topology.su_positions.size();
  std::vector<double> dists(n);
  for (std::size_t i = 0; i < n; ++i) {
    dists[i] = distance(tx.position, topology.su_positions[i]);
  }

  std::vector<SlotReport> reports(num_slots);
  for (std::size_t s = 0; s < num_slots; ++s) {
    SlotReport& rep = reports[s];
    rep.slot_id = s;
    rep.source = source;
    rep.energies_db.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rng::SplitMix64 stream(rng::substream(seed, s, i));
      rep.energies_db[i] = received_energy_db(tx, dists[i], ch, stream);
    }
  }
  return reports;
}

}  // namespace puea::scenario
