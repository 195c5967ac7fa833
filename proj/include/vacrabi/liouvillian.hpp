// liouvillian.hpp - jump channels and the dissipative generator in the dressed
// basis.
//
// Each channel |from> -> |to> with rate gamma enters as
//   gamma * ( 1/2 L rho L^+  -  1/4 {L^+ L, rho} ),   L = |to><from|,
// so the population transfer rate is gamma / 2.
//
// Vectorisation is column stacking: vec(rho)[a + D*b] = rho(a, b).

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vacrabi/core_model.hpp"

namespace vacrabi {

enum class ChannelLabel {
  gamma1, gamma2, gamma3, gamma4, gamma5, gamma6, gamma7, gamma8,
  gamma_a, gamma_b, gamma_c, gamma_e, generated
};

std::string_view to_string(ChannelLabel label);
// Throws std::invalid_argument on an unknown label.
ChannelLabel parse_channel_label(std::string_view text);

struct JumpChannel {
  std::size_t from = 0;
  std::size_t to = 0;
  double rate = 0.0;
  ChannelLabel label = ChannelLabel::generated;
};

// N = 1: the six channels among |0>, |+>, |->.
// N = 2: additionally gamma4..gamma8 and gamma_e out of / within the second doublet.
// N > 2: every doublet n >= 3 repeats the second-doublet pattern one step up
//        (RateTable::doublet(n)), labelled `generated`.
// Throws on negative rates.
std::vector<JumpChannel> build_jump_channels(const DressedLadder& ladder, const RateTable& rates);

// Rates keyed by (from, to) with the per-level total out-rate.
class TransitionMap {
 public:
  TransitionMap(std::span<const JumpChannel> channels, std::size_t dimension);

  std::size_t dimension() const { return static_cast<std::size_t>(rates_.rows()); }
  double rate(std::size_t from, std::size_t to) const { return rates_(to, from); }
  double out(std::size_t level) const { return out_(static_cast<Eigen::Index>(level)); }

 private:
  Eigen::MatrixXd rates_;  // (to, from)
  Eigen::VectorXd out_;
};

// d/dt of the dressed-basis populations: G(to, from) += gamma/2,
// G(from, from) -= gamma/2 for every channel.
Eigen::MatrixXd assemble_population_generator(std::span<const JumpChannel> channels,
                                              std::size_t dimension);

// -i (Omega_a - Omega_b) - (out(a) + out(b)) / 4. Throws when a == b.
std::complex<double> coherence_decay_rate(const DressedLadder& ladder, const TransitionMap& rates,
                                          std::size_t a, std::size_t b, Frame frame = Frame::lab);

// Full D^2 x D^2 Lindblad generator, built from the Hamiltonian and the jump
// operators by Kronecker products. Nothing about its block structure is
// assumed here.
Eigen::MatrixXcd assemble_superoperator(std::span<const JumpChannel> channels,
                                        const DressedLadder& ladder, Frame frame = Frame::lab);

inline Eigen::Index vec_index(std::size_t a, std::size_t b, std::size_t dimension) {
  return static_cast<Eigen::Index>(a + dimension * b);
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, std::size_t dimension);

struct Generator {
  DressedLadder ladder;
  RateTable rates;
  Frame frame = Frame::rotating;
  std::vector<JumpChannel> channels;
  Eigen::VectorXd out_rates;
  Eigen::MatrixXd population_block;   // G
  Eigen::MatrixXcd coherence_rates;   // Lambda_ab off the diagonal, 0 on it
  Eigen::MatrixXcd superoperator;

  std::size_t dimension() const { return ladder.size(); }
};

Generator build_generator(const DressedLadder& ladder, const RateTable& rates,
                          Frame frame = Frame::rotating);

}  // namespace vacrabi
