#pragma once

#include <cstdint>
#include <vector>

#include "puea/rng.hpp"

namespace puea::scenario {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

[[nodiscard]] double distance(const Position& a, const Position& b);

struct TransmitterProfile {
  Position position;
  double tx_power = 10.0;  // linear units
  double sigma2 = 8.0;     // shadowing variance, dB^2
};

struct ChannelParams {
  double alpha = 4.0;         // path-loss exponent
  double min_distance = 0.5;  // floor below which r^(-alpha) blows up
};

enum class Placement { InsideRegion, OutsideRegion };

enum class Source { Pu, Attacker };

struct Topology {
  std::vector<Position> su_positions;
  TransmitterProfile pu;
  TransmitterProfile attacker;
  Placement placement = Placement::InsideRegion;
  double d_pu_attacker = 0.0;
};

// One sensing slot: the energy (dB) each SU reported to the fusion center,
// plus the ground-truth transmitter for labeling.
struct SlotReport {
  std::uint64_t slot_id = 0;
  std::vector<double> energies_db;
  Source source = Source::Pu;
};

struct ScenarioParams {
  std::size_t n_sus = 40;
  double region = 100.0;  // square region side length
  double pt_pu = 10.0;
  double sigma2_pu = 8.0;
  double pt_attacker = 10.0;
  double sigma2_attacker = 8.0;
  // PU location for the outside placement; the attacker sits at distance d
  // from it along the line toward the region center.
  Position outside_pu{150.0, 150.0};
  ChannelParams channel;
};

// Draws n_sus distinct SU positions uniformly in the region and places the
// PU/attacker pair according to the placement rule, exactly d apart.
// Deterministic for a fixed seed. Throws DataError when the rejection loops
// cannot satisfy the distinctness/min-distance/region constraints
// (degenerate configuration).
[[nodiscard]] Topology generate_topology(const ScenarioParams& params,
                                         Placement placement, double d,
                                         std::uint64_t seed);

// Received energy in dB at distance r from tx: draws the shadowing variate
// beta ~ N(0, tx.sigma2) from the supplied stream and evaluates the linear
// path-loss/shadowing model 10*log10(P_t * r^(-alpha) * e^(a*beta)) with
// a = ln(10)/10. Throws std::invalid_argument when r < min_distance.
[[nodiscard]] double received_energy_db(const TransmitterProfile& tx, double r,
                                        const ChannelParams& ch,
                                        rng::SplitMix64& stream);

// One report per slot; the energy of SU i in slot s is drawn from the
// substream keyed by (seed, s, i), so results do not depend on evaluation
// order or parallelism.
[[nodiscard]] std::vector<SlotReport> simulate_slots(const Topology& topology,
                                                     Source source,
                                                     std::size_t num_slots,
                                                     const ChannelParams& ch,
                                                     std::uint64_t seed);

}  // namespace puea::scenario
