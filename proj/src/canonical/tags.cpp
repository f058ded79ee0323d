#include "kpa/canonical/tags.hpp"

#include <array>

#include "kpa/expr/errors.hpp"

namespace kpa::canonical {

namespace {

constexpr std::array kTags{
    TagInfo{"lorentz.rr", "Eq.1a", "{m_i, m_j} = eps_ijk m_k"},
    TagInfo{"lorentz.rb", "Eq.1b", "{m_i, n_j} = eps_ijk n_k"},
    TagInfo{"lorentz.bb", "Eq.1c", "{n_i, n_j} = -eps_ijk m_k"},
    TagInfo{"sr.rot.energy", "Eq.1d", "{m_i, p_0} = 0"},
    TagInfo{"sr.rot.momentum", "Eq.1e", "{m_i, p_j} = eps_ijk p_k"},
    TagInfo{"sr.boost.energy", "Eq.1f", "{n_i, p_0} = p_i"},
    TagInfo{"sr.boost.momentum", "Eq.1g", "{n_i, p_j} = delta_ij p_0"},
    TagInfo{"sr.phase.xp", "Eq.2a", "{x_mu, p_nu} = eta_mu_nu"},
    TagInfo{"sr.phase.commute", "Eq.2b", "{x_mu, x_nu} = {p_mu, p_nu} = 0"},
    TagInfo{"sr.realization", "Eq.3", "m_i = eps_ijk x_j p_k, n_i = x_i p_0 - x_0 p_i"},
    TagInfo{"sr.rot.time", "Eq.4a", "{m_i, x_0} = 0"},
    TagInfo{"sr.rot.space", "Eq.4b", "{m_i, x_j} = eps_ijk x_k"},
    TagInfo{"sr.boost.time", "Eq.4c", "{n_i, x_0} = x_i"},
    TagInfo{"sr.boost.space", "Eq.4d", "{n_i, x_j} = delta_ij x_0"},
    TagInfo{"dsr1.lorentz", "Eq.5", "M_i = m_i, N_i = n_i"},
    TagInfo{"dsr1.rot.energy", "Eq.6a", "{M_i, P_0} = 0"},
    TagInfo{"dsr1.rot.momentum", "Eq.6b", "{M_i, P_j} = eps_ijk P_k"},
    TagInfo{"dsr1.momenta", "Eq.7", "P_0 = f, P_i = p_i g; momenta commute"},
    TagInfo{"dsr1.boost.energy", "Eq.8a", "{N_i, P_0} = P_i D"},
    TagInfo{"dsr1.boost.momentum", "Eq.8b", "{N_i, P_j} = delta_ij A + P_i P_j B"},
    TagInfo{"dsr1.constraint", "Eq.9", "dA/dP0 D + 2 dA/dPP (A + PP B) - A B = 1"},
    TagInfo{"dsr1.inverse", "Eq.10", "p_0 = F, p_i = P_i G"},
    TagInfo{"dsr1.abd", "Eq.11", "A, B, D from f, g, F, G"},
    TagInfo{"dsr1.coproduct.space", "Eq.12", "Delta(X_mu) primitive"},
    TagInfo{"dsr1.coproduct.energy", "Eq.13a", "Delta(P_0) primitive"},
    TagInfo{"dsr1.coproduct.momentum", "Eq.13b", "Delta(P_i) = P_i (x) 1 + exp(-P_0/kappa) (x) P_i"},
    TagInfo{"dsr1.phase.x0p0", "Eq.14a", "{X_0, P_0} = -1"},
    TagInfo{"dsr1.phase.xipj", "Eq.14b", "{X_i, P_j} = delta_ij"},
    TagInfo{"dsr1.phase.commute", "Eq.14c", "{X_i, X_j} = {P_0, X_i} = 0"},
    TagInfo{"dsr1.phase.x0pi", "Eq.14d", "{X_0, P_i} = P_i/kappa"},
    TagInfo{"dsr1.phase.x0xi", "Eq.14e", "{X_0, X_i} = -X_i/kappa"},
    TagInfo{"dsr1.functions", "Eq.15", "f, g, F, G of the bicrossproduct basis"},
    TagInfo{"dsr1.functions.f", "Eq.15a", "f = kappa ln(p0/kappa + sqrt(1 + m^2/kappa^2))"},
    TagInfo{"dsr1.functions.g", "Eq.15b", "g = 1/(p0/kappa + sqrt(1 + m^2/kappa^2))"},
    TagInfo{"dsr1.functions.F", "Eq.15c", "F = kappa sinh(P0/kappa) + PP exp(P0/kappa)/(2 kappa)"},
    TagInfo{"dsr1.functions.G", "Eq.15d", "G = exp(P0/kappa)"},
    TagInfo{"dsr1.triple", "Eq.16", "A, B, D of the bicrossproduct basis"},
    TagInfo{"dsr1.triple.A", "Eq.16a", "A = kappa/2 (1 - exp(-2P0/kappa)) + PP/(2 kappa)"},
    TagInfo{"dsr1.triple.B", "Eq.16b", "B = -1/kappa"},
    TagInfo{"dsr1.triple.D", "Eq.16c", "D = 1"},
    TagInfo{"dsr1.coordinates", "Eq.17", "X_mu = x_mu (p0/kappa + sqrt(1 + m^2/kappa^2))"},
    TagInfo{"dsr1.rotations", "Eq.18a", "M_i = eps_ijk X_j P_k"},
    TagInfo{"dsr1.boosts", "Eq.18b", "N_i in terms of X and P"},
    TagInfo{"dsr1.rot.time", "Eq.19a", "{M_i, X_0} = 0"},
    TagInfo{"dsr1.rot.space", "Eq.19b", "{M_i, X_j} = eps_ijk X_k"},
    TagInfo{"dsr1.boost.time", "Eq.19c", "{N_i, X_0} = X_i - N_i/kappa"},
    TagInfo{"dsr1.boost.space", "Eq.19d", "{N_i, X_j} = delta_ij X_0 - eps_ijk M_k/kappa"},
    TagInfo{"dual.lorentz", "Eq.20", "Mbar_i = m_i, Nbar_i = n_i"},
    TagInfo{"dual.rot.time", "Eq.21a", "{Mbar_i, Xbar_0} = 0"},
    TagInfo{"dual.rot.space", "Eq.21b", "{Mbar_i, Xbar_j} = eps_ijk Xbar_k"},
    TagInfo{"dual.coordinates", "Eq.22", "Xbar_0 = fbar, Xbar_i = x_i gbar"},
    TagInfo{"dual.inverse", "Eq.23", "x_0 = Fbar, x_i = Xbar_i Gbar"},
    TagInfo{"dual.boost.time", "Eq.24a", "{Nbar_i, Xbar_0} = Dbar Xbar_i"},
    TagInfo{"dual.boost.space", "Eq.24b", "{Nbar_i, Xbar_j} = delta_ij Abar + Xbar_i Xbar_j Bbar"},
    TagInfo{"dual.abd", "Eq.25", "Abar, Bbar, Dbar from fbar, gbar, Fbar, Gbar"},
    TagInfo{"dual.constraint", "Eq.26", "dAbar/dX0 Dbar + 2 dAbar/dXX (Abar + XX Bbar) - Abar Bbar = 1"},
    TagInfo{"dual.coordinates.commute", "Eq.27", "{Xbar_mu, Xbar_nu} = 0"},
    TagInfo{"dual.coproduct.momentum", "Eq.28", "Delta(Pbar_mu) primitive"},
    TagInfo{"dual.coproduct.time", "Eq.29a", "Delta(Xbar_0) primitive"},
    TagInfo{"dual.coproduct.space", "Eq.29b", "Delta(Xbar_i) = Xbar_i (x) 1 + exp(-kappabar Xbar_0) (x) Xbar_i"},
    TagInfo{"dual.phase.p0x0", "Eq.30a", "{Pbar_0, Xbar_0} = 1"},
    TagInfo{"dual.phase.pixj", "Eq.30b", "{Pbar_i, Xbar_j} = -delta_ij"},
    TagInfo{"dual.phase.commute", "Eq.30c", "{Pbar_i, Xbar_0} = {Pbar_i, Pbar_j} = 0"},
    TagInfo{"dual.phase.p0xi", "Eq.30d", "{Pbar_0, Xbar_i} = -kappabar Xbar_i"},
    TagInfo{"dual.phase.p0pi", "Eq.30e", "{Pbar_0, Pbar_i} = kappabar Pbar_i"},
    TagInfo{"dual.functions", "Eq.31", "fbar, gbar, Fbar, Gbar of the dual bicrossproduct basis"},
    TagInfo{"dual.triple", "Eq.32", "Abar, Bbar, Dbar of the dual bicrossproduct basis"},
    TagInfo{"dual.triple.A", "Eq.32a", "Abar = (1 - exp(-2 kappabar Xbar_0))/(2 kappabar) + kappabar XX/2"},
    TagInfo{"dual.triple.B", "Eq.32b", "Bbar = -kappabar"},
    TagInfo{"dual.triple.D", "Eq.32c", "Dbar = 1"},
    TagInfo{"dual.momenta", "Eq.33", "Pbar_0 = p0 W, Pbar_i = p_i W - kappabar n_i"},
    TagInfo{"dual.momenta.inverse", "Eq.34", "p in terms of Xbar and Pbar"},
    TagInfo{"dual.rotations", "Eq.35", "Mbar_i = eps_ijk Xbar_j Pbar_k"},
    TagInfo{"dual.rot.energy", "Eq.36a", "{Mbar_i, Pbar_0} = 0"},
    TagInfo{"dual.rot.momentum", "Eq.36b", "{Mbar_i, Pbar_j} = eps_ijk Pbar_k"},
    TagInfo{"dual.boost.energy", "Eq.37a", "{Nbar_i, Pbar_0} = Pbar_i + kappabar Nbar_i"},
    TagInfo{"dual.boost.momentum", "Eq.37b", "{Nbar_i, Pbar_j} = delta_ij Pbar_0 + kappabar eps_ijk Mbar_k"},
    TagInfo{"limit.kappa", "Eq.16", "kappa -> infinity recovers the Poincare algebra"},
    TagInfo{"limit.kappabar", "Eq.32", "kappabar -> 0 recovers the Poincare algebra"},
};

}  // namespace

std::span<const TagInfo> tag_table() { return kTags; }

std::string tag(std::string_view key) {
  for (const auto& t : kTags)
    if (t.key == key) return std::string(t.tag);
  throw Error("no report tag for key " + std::string(key));
}

std::string claim_for_tag(std::string_view t) {
  for (const auto& e : kTags)
    if (e.tag == t) return std::string(e.claim);
  return {};
}

}  // namespace kpa::canonical
