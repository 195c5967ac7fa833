#include "vacrabi/liouvillian.hpp"

#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace vacrabi {

namespace {

struct LabelName {
  ChannelLabel label;
  std::string_view name;
};

constexpr LabelName kLabelNames[] = {
    {ChannelLabel::gamma1, "gamma1"},   {ChannelLabel::gamma2, "gamma2"},
    {ChannelLabel::gamma3, "gamma3"},   {ChannelLabel::gamma4, "gamma4"},
    {ChannelLabel::gamma5, "gamma5"},   {ChannelLabel::gamma6, "gamma6"},
    {ChannelLabel::gamma7, "gamma7"},   {ChannelLabel::gamma8, "gamma8"},
    {ChannelLabel::gamma_a, "gamma_a"}, {ChannelLabel::gamma_b, "gamma_b"},
    {ChannelLabel::gamma_c, "gamma_c"}, {ChannelLabel::gamma_e, "gamma_e"},
    {ChannelLabel::generated, "generated"},
};

}  // namespace

std::string_view to_string(ChannelLabel label) {
  for (const auto& entry : kLabelNames) {
    if (entry.label == label) return entry.name;
  }
  return "?";
}

ChannelLabel parse_channel_label(std::string_view text) {
  for (const auto& entry : kLabelNames) {
    if (entry.name == text) return entry.label;
  }
  throw std::invalid_argument("unknown channel label '" + std::string(text) + "'");
}

std::vector<JumpChannel> build_jump_channels(const DressedLadder& ladder, const RateTable& rates) {
  rates.validate();
  const int n_max = ladder.max_doublet();
  const std::size_t ground = DressedLadder::ground_index();
  const std::size_t p1 = ladder.index(1, Branch::plus);
  const std::size_t m1 = ladder.index(1, Branch::minus);

  std::vector<JumpChannel> channels = {
      {p1, ground, rates.gamma1, ChannelLabel::gamma1},
      {m1, ground, rates.gamma2, ChannelLabel::gamma2},
      {p1, m1, rates.gamma3, ChannelLabel::gamma3},
      {ground, p1, rates.gamma_a, ChannelLabel::gamma_a},
      {ground, m1, rates.gamma_b, ChannelLabel::gamma_b},
      {m1, p1, rates.gamma_c, ChannelLabel::gamma_c},
  };

  for (int n = 2; n <= n_max; ++n) {
    const DoubletRates d = rates.doublet(n);
    const std::size_t p = ladder.index(n, Branch::plus);
    const std::size_t m = ladder.index(n, Branch::minus);
    const std::size_t lp = ladder.index(n - 1, Branch::plus);
    const std::size_t lm = ladder.index(n - 1, Branch::minus);
    const bool named = n == 2;
    auto label = [named](ChannelLabel l) { return named ? l : ChannelLabel::generated; };
    channels.push_back({p, lp, d.plus_to_lower_plus, label(ChannelLabel::gamma4)});
    channels.push_back({p, m, d.plus_to_minus, label(ChannelLabel::gamma5)});
    channels.push_back({p, lm, d.plus_to_lower_minus, label(ChannelLabel::gamma6)});
    channels.push_back({m, lp, d.minus_to_lower_plus, label(ChannelLabel::gamma7)});
    channels.push_back({m, lm, d.minus_to_lower_minus, label(ChannelLabel::gamma8)});
    channels.push_back({m, p, d.minus_to_plus, label(ChannelLabel::gamma_e)});
  }
  return channels;
}

TransitionMap::TransitionMap(std::span<const JumpChannel> channels, std::size_t dimension)
    : rates_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dimension),
                                   static_cast<Eigen::Index>(dimension))),
      out_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension))) {
  for (const auto& ch : channels) {
    if (ch.from >= dimension || ch.to >= dimension) throw std::out_of_range("channel outside the ladder");
    if (ch.from == ch.to) throw std::invalid_argument("channel must connect distinct levels");
    if (!(ch.rate >= 0.0)) throw std::invalid_argument("negative channel rate");
    rates_(static_cast<Eigen::Index>(ch.to), static_cast<Eigen::Index>(ch.from)) += ch.rate;
    out_(static_cast<Eigen::Index>(ch.from)) += ch.rate;
  }
}

Eigen::MatrixXd assemble_population_generator(std::span<const JumpChannel> channels,
                                              std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(d, d);
  for (const auto& ch : channels) {
    const auto from = static_cast<Eigen::Index>(ch.from);
    const auto to = static_cast<Eigen::Index>(ch.to);
    G(to, from) += 0.5 * ch.rate;
    G(from, from) -= 0.5 * ch.rate;
  }
  return G;
}

std::complex<double> coherence_decay_rate(const DressedLadder& ladder, const TransitionMap& rates,
                                          std::size_t a, std::size_t b, Frame frame) {
  if (a == b) throw std::invalid_argument("coherence rate needs two distinct levels");
  const double dw = ladder.frequency(a, frame) - ladder.frequency(b, frame);
  return {-0.25 * (rates.out(a) + rates.out(b)), -dw};
}

Eigen::MatrixXcd assemble_superoperator(std::span<const JumpChannel> channels,
                                        const DressedLadder& ladder, Frame frame) {
  using Eigen::kroneckerProduct;
  const auto d = static_cast<Eigen::Index>(ladder.size());
  const std::complex<double> i(0.0, 1.0);

  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) H(k, k) = ladder.frequency(static_cast<std::size_t>(k), frame);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);

  Eigen::MatrixXcd L = -i * (kroneckerProduct(I, H).eval() - kroneckerProduct(H.transpose(), I).eval());
  for (const auto& ch : channels) {
    if (ch.rate == 0.0) continue;
    Eigen::MatrixXcd jump = Eigen::MatrixXcd::Zero(d, d);
    jump(static_cast<Eigen::Index>(ch.to), static_cast<Eigen::Index>(ch.from)) = 1.0;
    const Eigen::MatrixXcd K = jump.adjoint() * jump;
    L += (0.5 * ch.rate) * kroneckerProduct(jump.conjugate(), jump).eval();
    L -= (0.25 * ch.rate) * (kroneckerProduct(I, K).eval() + kroneckerProduct(K.transpose(), I).eval());
  }
  return L;
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, std::size_t dimension) {
  const auto d = static_cast<Eigen::Index>(dimension);
  if (v.size() != d * d) throw std::invalid_argument("vector length does not match dimension^2");
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d);
}

Generator build_generator(const DressedLadder& ladder, const RateTable& rates, Frame frame) {
  Generator gen{ladder, rates, frame, build_jump_channels(ladder, rates), {}, {}, {}, {}};
  const std::size_t dim = ladder.size();
  const TransitionMap map(gen.channels, dim);

  gen.out_rates.resize(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) gen.out_rates(static_cast<Eigen::Index>(k)) = map.out(k);
  gen.population_block = assemble_population_generator(gen.channels, dim);
  gen.coherence_rates = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      if (a != b) {
        gen.coherence_rates(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            coherence_decay_rate(ladder, map, a, b, frame);
      }
    }
  }
  gen.superoperator = assemble_superoperator(gen.channels, ladder, frame);
  return gen;
}

}  // namespace vacrabi
