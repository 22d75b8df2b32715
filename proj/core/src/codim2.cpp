#include "steinkit/codim2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

namespace steinkit {

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::FlatNormal: return "FlatNormal";
    case Branch::Codim2: return "Codim2";
    case Branch::OutOfScope: return "OutOfScope";
  }
  return "?";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::NotEinstein: return "NotEinstein";
    case Status::NotTwoStein: return "NotTwoStein";
    case Status::ConstantCurvature: return "ConstantCurvature";
    case Status::ViolationCandidate: return "ViolationCandidate";
    case Status::NonConstantCurvature: return "NonConstantCurvature";
  }
  return "?";
}

std::string_view to_string(ProofCase c) {
  switch (c) {
    case ProofCase::None: return "none";
    case ProofCase::H1Nonzero: return "H1_nonzero";
    case ProofCase::TwoPairs: return "H1_zero_two_pairs";
    case ProofCase::OnePairBetaNonzero: return "H1_zero_one_pair_beta_nonzero";
    case ProofCase::OnePairBetaZero: return "H1_zero_one_pair_beta_zero";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Restricted quartic

namespace {

void for_each_exponent(int k, int total, std::vector<int>& cur, const std::function<void()>& fn) {
  if (static_cast<int>(cur.size()) == k - 1) {
    cur.push_back(total);
    fn();
    cur.pop_back();
    return;
  }
  for (int e = total; e >= 0; --e) {
    cur.push_back(e);
    for_each_exponent(k, total - e, cur, fn);
    cur.pop_back();
  }
}

double factorial(int m) {
  double r = 1.0;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

}  // namespace

double RestrictedQuartic::coefficient(const std::vector<int>& exponents) const {
  const auto it = coeffs.find(exponents);
  return it == coeffs.end() ? 0.0 : it->second;
}

double RestrictedQuartic::evaluate(const Vector& restricted) const {
  if (restricted.size() != static_cast<Eigen::Index>(indices.size())) {
    throw DimensionMismatch("RestrictedQuartic::evaluate: wrong number of coordinates");
  }
  double total = 0.0;
  for (const auto& [exps, c] : coeffs) {
    double term = c;
    for (std::size_t m = 0; m < exps.size(); ++m) term *= std::pow(restricted(static_cast<Eigen::Index>(m)), exps[m]);
    total += term;
  }
  return total;
}

RestrictedQuartic restricted_quartic(const QuarticForm& q, std::span<const int> indices) {
  const int k = static_cast<int>(indices.size());
  if (k < 1) throw DimensionMismatch("restricted_quartic: empty index set");
  for (int a = 0; a < k; ++a) {
    const int idx = indices[static_cast<std::size_t>(a)];
    if (idx < 0 || idx >= q.n()) throw DimensionMismatch("restricted_quartic: index out of range");
    for (int b = 0; b < a; ++b)
      if (indices[static_cast<std::size_t>(b)] == idx) throw DimensionMismatch("restricted_quartic: repeated index");
  }

  RestrictedQuartic out;
  out.indices.assign(indices.begin(), indices.end());
  std::vector<int> cur;
  for_each_exponent(k, 4, cur, [&] {
    std::array<int, 4> slots{};
    std::size_t at = 0;
    double multinomial = factorial(4);
    for (int m = 0; m < k; ++m) {
      const int e = cur[static_cast<std::size_t>(m)];
      multinomial /= factorial(e);
      for (int r = 0; r < e; ++r) slots[at++] = indices[static_cast<std::size_t>(m)];
    }
    out.coeffs[cur] = multinomial * q(slots[0], slots[1], slots[2], slots[3]);
  });
  return out;
}

RestrictedQuartic restricted_quartic(const ShapeFamily& f, std::span<const int> indices) {
  return restricted_quartic(two_stein_quartic(f), indices);
}

// ---------------------------------------------------------------------------
// Frame normalization

ShapeFamily normalize_frame(const ShapeFamily& f, double tol) {
  if (f.p() != 2) throw DimensionMismatch("normalize_frame: requires codimension p = 2");
  const Traces tr = traces(f);
  ShapeFamily g = normal_frame_rotation(f, OrthogonalMatrix::rotation2(std::atan2(tr.H(1), tr.H(0))));
  if (std::abs(g.op(0).trace()) <= tol * std::max(1.0, g.op(0).norm())) {
    const Traces t2 = traces(g);
    const double phi = 0.5 * std::atan2(2.0 * t2.T(0, 1), t2.T(0, 0) - t2.T(1, 1));
    g = normal_frame_rotation(g, OrthogonalMatrix::rotation2(phi));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Identity suite
//
// Closed forms below are the exact coefficients of Tr((R'_X)^2) for operators
// whose leading corner is one or two 2x2 blocks (plus a 1x1 block), written as
// functions of the block entries and the traces T^{st}. They were fixed once by
// symbolic expansion of the quartic; the tests re-derive them with an
// independent polynomial expansion.

namespace {

struct Coeffs {
  const RestrictedQuartic& q;
  double operator()(std::initializer_list<int> e) const { return q.coefficient(std::vector<int>(e)); }
};

IdentityCheck make_check(std::string name, std::string combination, double measured, double predicted,
                         double multiplier, double relation) {
  return {std::move(name), std::move(combination), measured, predicted, std::abs(measured - predicted),
          multiplier, relation};
}

// Basis with the listed blocks' columns first (in order), then the rest.
OrthogonalMatrix leading_blocks(const BlockStructure& b, const std::vector<std::size_t>& lead) {
  const int n = b.basis.n();
  Matrix out(n, n);
  Eigen::Index col = 0;
  auto put = [&](std::size_t i) {
    const int size = block_size(b.blocks[i]);
    out.middleCols(col, size) = b.basis.matrix().middleCols(b.offset(i), size);
    col += size;
  };
  for (auto i : lead) put(i);
  for (std::size_t i = 0; i < b.blocks.size(); ++i)
    if (std::find(lead.begin(), lead.end(), i) == lead.end()) put(i);
  return OrthogonalMatrix(out);
}

}  // namespace

IdentitySuite proof_identity_suite(const ShapeFamily& f, const BlockStructure& b, double tol) {
  if (f.p() != 2) throw DimensionMismatch("proof_identity_suite: requires p = 2");
  if (b.basis.n() != f.n()) throw DimensionMismatch("proof_identity_suite: census dimension mismatch");

  std::vector<std::size_t> pair_idx;
  std::vector<std::size_t> diag_idx;
  for (std::size_t i = 0; i < b.blocks.size(); ++i)
    (std::holds_alternative<PairBlock>(b.blocks[i]) ? pair_idx : diag_idx).push_back(i);
  if (pair_idx.empty()) throw InapplicableCase("census has no 2x2 blocks");

  const Traces tr = traces(f);
  const double h1 = tr.H(0);
  const double t11 = tr.T(0, 0);
  const double t12 = tr.T(0, 1);
  const double t22 = tr.T(1, 1);
  const double mag = f.magnitude();
  const double rel_tol = tol * mag * mag;
  double block_scale = 1.0;
  for (const auto& a : f.operators()) block_scale = std::max(block_scale, a.norm());

  IdentitySuite suite;
  std::vector<std::size_t> lead;
  if (std::abs(h1) > tol * std::max(1.0, f.op(0).norm())) {
    suite.sub_case = ProofCase::H1Nonzero;
    lead = {pair_idx[0]};
  } else if (pair_idx.size() >= 2) {
    suite.sub_case = ProofCase::TwoPairs;
    lead = {pair_idx[0], pair_idx[1]};
  } else {
    if (diag_idx.empty()) throw InapplicableCase("one 2x2 block and no 1x1 block (n < 3)");
    const double beta = std::get<PairBlock>(b.blocks[pair_idx[0]]).beta;
    suite.sub_case = std::abs(beta) > tol * block_scale ? ProofCase::OnePairBetaNonzero
                                                        : ProofCase::OnePairBetaZero;
    lead = {pair_idx[0], diag_idx[0]};
  }

  const ShapeFamily g = change_basis(f, leading_blocks(b, lead));
  const QuarticForm qf = two_stein_quartic(g);
  std::string terminal;

  switch (suite.sub_case) {
    case ProofCase::H1Nonzero: {
      const auto& pb = std::get<PairBlock>(b.blocks[lead[0]]);
      const double al = pb.alpha, be = pb.beta, ga = pb.gamma, h = 0.5 * h1;
      const std::array<int, 2> idx{0, 1};
      const RestrictedQuartic rq = restricted_quartic(qf, idx);
      const Coeffs c{rq};
      const double r12 = t12 - 2 * al * be;
      suite.checks.push_back(make_check("T12 = 2 alpha beta", "[3,1] + [1,3]", c({3, 1}) + c({1, 3}),
                                        4 * ga * h1 * r12, 4 * ga * h1, r12));
      const double rel2 = be * ga * (2 * be * be + 2 * ga * ga - t22);
      suite.checks.push_back(make_check("beta gamma (2 beta^2 + 2 gamma^2 - T22) = 0", "[3,1] - [1,3]",
                                        c({3, 1}) - c({1, 3}), -8 * rel2 + 8 * al * ga * r12, -8, rel2));
      const double r11 = t11 - 2 * al * al - 0.5 * h1 * h1;
      suite.checks.push_back(make_check("T11 = 2 alpha^2 + (H1)^2 / 2", "[4,0] - [0,4]", c({4, 0}) - c({0, 4}),
                                        2 * h1 * al * r11 + 2 * h1 * be * r12, 2 * h1 * al, r11));
      const double rel4 = (ga * ga - be * be) * (2 * be * be + 2 * ga * ga - t22);
      suite.checks.push_back(make_check("(gamma^2 - beta^2)(2 beta^2 + 2 gamma^2 - T22) = 0",
                                        "[4,0] + [0,4] - [2,2]", c({4, 0}) + c({0, 4}) - c({2, 2}),
                                        4 * rel4 + 8 * al * be * r12 + 4 * al * al * (t11 - 2 * al * al - 2 * h * h),
                                        4, rel4));
      terminal = "T22 = 2 beta^2 + 2 gamma^2 leaves a common kernel, so R'_X = 0";
      break;
    }
    case ProofCase::TwoPairs: {
      const auto& p1 = std::get<PairBlock>(b.blocks[lead[0]]);
      const auto& p2 = std::get<PairBlock>(b.blocks[lead[1]]);
      const std::array<int, 4> idx{0, 1, 2, 3};
      const RestrictedQuartic rq = restricted_quartic(qf, idx);
      const Coeffs c{rq};
      const double rel = t22 + p1.alpha * p1.alpha - p1.beta * p1.beta - p1.gamma * p1.gamma +
                         p2.alpha * p2.alpha - p2.beta * p2.beta - p2.gamma * p2.gamma;
      const double mult = 8 * p1.gamma * p2.gamma;
      suite.checks.push_back(make_check(
          "T22 + a1^2 - b1^2 - g1^2 + a2^2 - b2^2 - g2^2 = 0", "[1,1,1,1]", c({1, 1, 1, 1}), mult * rel, mult, rel));
      terminal = "T22 >= 2 (b1^2 + b2^2 + g1^2 + g2^2) contradicts the relation";
      break;
    }
    case ProofCase::OnePairBetaNonzero:
    case ProofCase::OnePairBetaZero: {
      const auto& pb = std::get<PairBlock>(b.blocks[lead[0]]);
      const auto& db = std::get<DiagBlock>(b.blocks[lead[1]]);
      const double al = pb.alpha, be = pb.beta, ga = pb.gamma, la = db.a, mu = db.b;
      const double s = al * al + be * be + ga * ga;
      const double big_l = la * la + mu * mu;
      const std::array<int, 3> idx{0, 1, 2};
      const RestrictedQuartic rq = restricted_quartic(qf, idx);
      const Coeffs c{rq};
      // [4,0,0] - [0,0,4], valid for every beta and mu.
      const double x1x3_quartics = (al * al - la * la) * t11 + (2 * al * be - 2 * la * mu) * t12 +
                                   (be * be - mu * mu) * t22 - std::pow(al, 4) - 2 * al * al * be * be +
                                   2 * al * al * ga * ga - std::pow(be, 4) + std::pow(ga, 4) + std::pow(la, 4) +
                                   2 * la * la * mu * mu + std::pow(mu, 4);
      if (suite.sub_case == ProofCase::OnePairBetaNonzero) {
        const double rel1 = 4 * be * (2 * al * al + 2 * be * be + 2 * ga * ga - t22);
        suite.checks.push_back(make_check("4 beta (2 alpha^2 + 2 beta^2 + 2 gamma^2 - T22) = 0", "[3,1,0]",
                                          c({3, 1, 0}), -ga * rel1 + 4 * al * ga * t12, -ga, rel1));
        const double rel2 = t11 - 2 * s;
        suite.checks.push_back(make_check(
            "T11 = 2 alpha^2 + 2 beta^2 + 2 gamma^2", "[4,0,0] - [2,2,0] / 2", c({4, 0, 0}) - 0.5 * c({2, 2, 0}),
            2 * al * al * rel2 + 4 * al * be * t12 + 2 * (be * be - ga * ga) * (t22 - 2 * s), 2 * al * al, rel2));
        suite.checks.push_back(make_check("alpha gamma = 0", "[4,0,0] - [0,0,4]", c({4, 0, 0}) - c({0, 0, 4}),
                                          x1x3_quartics, 2 * al * ga, al * ga));
        (void)big_l;
        terminal = "alpha gamma = 0 contradicts the 2x2 block";
      } else {
        const double rel1 = mu * (t22 + al * al - ga * ga - la * la - mu * mu);
        const double pred1 = 4 * ga *
                             (la * t12 + mu * t22 + al * al * mu - 2 * al * be * la - be * be * mu - ga * ga * mu -
                              la * la * mu - mu * mu * mu);
        suite.checks.push_back(make_check("mu (T22 + alpha^2 - gamma^2 - lambda^2 - mu^2) = 0", "[1,1,2]",
                                          c({1, 1, 2}), pred1, 4 * ga, rel1));
        const double rel2 = t11 - 4 * al * al - 2 * ga * ga;
        suite.checks.push_back(make_check("T11 = 4 alpha^2 + 2 gamma^2", "[4,0,0] - [0,0,4]",
                                          c({4, 0, 0}) - c({0, 0, 4}), x1x3_quartics, -ga * ga, rel2));
        const double rel3 = t11 - 2 * al * al;
        const double pred3 =
            4 * (t11 * al * la + t12 * al * mu + t12 * be * la + t22 * be * mu - std::pow(al, 3) * la -
                 al * al * be * mu - al * be * be * la + al * ga * ga * la - al * std::pow(la, 3) - al * la * mu * mu -
                 std::pow(be, 3) * mu - be * ga * ga * mu - be * la * la * mu - be * std::pow(mu, 3));
        suite.checks.push_back(make_check("T11 = 2 alpha^2", "[2,0,2] - [0,2,2]", c({2, 0, 2}) - c({0, 2, 2}),
                                          pred3, 4 * al * la, rel3));
        (void)big_l;
        terminal = "T11 = 4 alpha^2 + 2 gamma^2 and T11 = 2 alpha^2 force alpha gamma = 0";
      }
      break;
    }
    case ProofCase::None:
      break;
  }

  suite.eliminated_by = terminal;
  for (const auto& chk : suite.checks) {
    if (std::abs(chk.relation_residual) > rel_tol) {
      suite.eliminated_by = chk.name;
      break;
    }
  }
  return suite;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

void conclude_flat(TheoremVerdict& v, const ShapeFamily& f, const FlatDiagonalization& d,
                   const AnalyzeOptions& opt) {
  auto& diag = v.diagnostics;
  FlatReport rep = flat_identities(d);
  if (!rep.two_stein(opt.tol)) {
    diag.flat = rep;
    diag.notes.emplace_back("flat 2-stein identities fail in the common eigenbasis");
    v.status = Status::NotTwoStein;
    return;
  }
  rep = constant_curvature_conclusion(f, rep, opt.samples, opt.seed, opt.tol);
  diag.flat = rep;
  const double gate = opt.tol * f.magnitude();
  if (*rep.conclusion_residual <= gate) {
    v.status = Status::ConstantCurvature;
    v.kappa = rep.kappa;
  } else {
    diag.notes.emplace_back("Jacobi operator is not of constant-curvature form at tolerance");
    v.status = Status::NotTwoStein;
  }
}

int count_strong_pairs(const BlockStructure& bs, const PencilPair& pencil, double tol) {
  const double scale = std::max({1.0, pencil.q1().norm(), pencil.q2().norm()});
  int strong = 0;
  for (const auto& pb : bs.pairs())
    if (std::abs(pb.alpha * pb.gamma) > 10.0 * tol * scale * scale) ++strong;
  return strong;
}

}  // namespace

TheoremVerdict analyze(const ShapeFamily& f, const AnalyzeOptions& opt) {
  TheoremVerdict v;
  auto& d = v.diagnostics;
  d.notes = f.scope_warnings();
  const double mag = f.magnitude();
  const bool flat = is_flat_normal(f, opt.tol);
  v.branch = flat ? Branch::FlatNormal : (f.p() == 2 ? Branch::Codim2 : Branch::OutOfScope);

  const EinsteinReport ein = einstein_check(f);
  d.c1 = ein.c1;
  d.einstein_residual = ein.residual;
  if (!ein.passes(opt.tol, mag)) {
    v.status = Status::NotEinstein;
    return v;
  }

  const TwoSteinReport ts = two_stein_check(f);
  d.c2 = ts.c2;
  d.quartic_residual = ts.quartic_residual;
  d.schur_gap = ts.schur_gap;
  if (!ts.passes(opt.tol)) {
    v.status = Status::NotTwoStein;
    return v;
  }

  if (flat) {
    conclude_flat(v, f, simultaneous_diagonalize(f, opt.tol, opt.seed), opt);
    if (f.p() == 2) {
      // Cross-check: a commuting Einstein pair must decompose without 2x2 blocks.
      try {
        const ShapeFamily nf = normalize_frame(f, opt.tol);
        const TracelessParts tp = traceless_parts(nf, opt.tol);
        d.census = simultaneous_block_diagonalize(tp.pencil, opt.tol);
        d.strong_pairs = count_strong_pairs(*d.census, tp.pencil, opt.tol);
      } catch (const Error& e) {
        d.notes.emplace_back(std::string("block census unavailable: ") + e.what());
      }
    }
    return v;
  }

  if (f.p() == 2) {
    const ShapeFamily nf = normalize_frame(f, opt.tol);
    try {
      const TracelessParts tp = traceless_parts(nf, opt.tol);
      d.census = simultaneous_block_diagonalize(tp.pencil, opt.tol);
      d.strong_pairs = count_strong_pairs(*d.census, tp.pencil, opt.tol);
    } catch (const Error& e) {
      d.notes.emplace_back(std::string("pencil hypothesis fails at tolerance: ") + e.what());
      v.status = Status::NotEinstein;
      return v;
    }
    if (d.strong_pairs == 0) {
      conclude_flat(v, nf, diagonalization_in_basis(nf, d.census->basis), opt);
      return v;
    }
    v.status = Status::ViolationCandidate;
    try {
      d.identities = proof_identity_suite(nf, *d.census, opt.tol);
    } catch (const InapplicableCase& e) {
      d.notes.emplace_back(std::string("identity suite inapplicable: ") + e.what());
    }
    return v;
  }

  d.sectional = sectional_extremes(f, opt.samples, opt.seed);
  const double spread = d.sectional->max - d.sectional->min;
  if (spread > 10.0 * std::sqrt(opt.tol) * mag) {
    d.non_constant_curvature = true;
    v.status = Status::NonConstantCurvature;
  } else {
    v.status = Status::ConstantCurvature;
    v.kappa = d.sectional->mean;
  }
  return v;
}

}  // namespace steinkit
