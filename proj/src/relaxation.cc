#include "homocp/relaxation.h"

#include <chrono>
#include <cmath>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "homocp/errors.h"

namespace homocp {

namespace {

int CeilHalf(int d) { return (d + 1) / 2; }

void Generate(const std::vector<Var>& vars, std::size_t pos, int remaining,
              std::array<int, kNumVars>* exps, std::vector<Monomial>* out) {
  if (pos == vars.size()) {
    out->emplace_back(*exps);
    return;
  }
  const int idx = static_cast<int>(vars[pos]);
  for (int e = 0; e <= remaining; ++e) {
    (*exps)[idx] = e;
    Generate(vars, pos + 1, remaining - e, exps, out);
  }
  (*exps)[idx] = 0;
}

// Accumulates coef * y[pos] terms; zero coefficients are dropped at the end.
class FormBuilder {
 public:
  void Add(int pos, double coef) { terms_[pos] += coef; }
  LinearForm Build(double constant = 0.0) const {
    LinearForm f;
    f.constant = constant;
    for (const auto& [pos, c] : terms_) {
      if (c != 0.0) f.terms.emplace_back(pos, c);
    }
    return f;
  }

 private:
  std::map<int, double> terms_;
};

Polynomial Normalized(const Polynomial& p) {
  double scale = 0.0;
  for (const auto& [m, c] : p.terms()) scale = std::max(scale, std::abs(c));
  return scale > 0 ? p * Polynomial(1.0 / scale) : p;
}

}  // namespace

MomentIndex::MomentIndex(std::vector<Var> variables, int max_degree)
    : variables_(std::move(variables)), max_degree_(max_degree) {
  monomials_ = MonomialsUpTo(variables_, max_degree_);
  for (int i = 0; i < size(); ++i) positions_.emplace(monomials_[i], i);
}

std::vector<Monomial> MomentIndex::MonomialsUpTo(const std::vector<Var>& variables, int degree) {
  std::vector<Monomial> out;
  std::array<int, kNumVars> exps{};
  Generate(variables, 0, degree, &exps, &out);
  std::sort(out.begin(), out.end());
  return out;
}

int MomentIndex::CountUpTo(int d) const {
  int n = 0;
  for (const auto& m : monomials_) {
    if (m.total_degree() <= d) ++n;
  }
  return n;
}

int MomentIndex::position(const Monomial& m) const {
  const auto it = positions_.find(m);
  if (it == positions_.end()) {
    throw OrderTooSmall("monomial " + m.ToString() + " exceeds moment degree " +
                        std::to_string(max_degree_));
  }
  return it->second;
}

double LinearForm::Evaluate(const Eigen::VectorXd& y) const {
  double v = constant;
  for (const auto& [pos, c] : terms) v += c * y(pos);
  return v;
}

int MinOrder(const MeasureLP& lp) { return std::max(1, CeilHalf(MaxConstraintDegree(lp))); }

LinearForm MomentRelaxation::Functional(int measure, const Polynomial& original) const {
  Polynomial p = original;
  for (Var v : kAllVars) {
    const int i = static_cast<int>(v);
    const double off = scale_offset[measure][i];
    const double fac = scale_factor[measure][i];
    if (off != 0.0 || fac != 1.0) {
      p = Substitute(p, v, Polynomial(off) + Polynomial(fac) * Polynomial(v));
    }
  }
  FormBuilder fb;
  for (const auto& [m, c] : p.terms()) fb.Add(offsets[measure] + indices[measure].position(m), c);
  return fb.Build();
}

Eigen::VectorXd MomentRelaxation::MeasureMoments(const Eigen::VectorXd& y, int measure) const {
  return y.segment(offsets[measure], indices[measure].size());
}

Eigen::VectorXd MomentRelaxation::OriginalMoments(const Eigen::VectorXd& y, int measure) const {
  const auto& idx = indices[measure];
  Eigen::VectorXd out(idx.size());
  for (int i = 0; i < idx.size(); ++i) {
    out(i) = Functional(measure, Polynomial(idx.monomials()[i], 1.0)).Evaluate(y);
  }
  return out;
}

MomentRelaxation AssembleSdp(const MeasureLP& lp, int order, const AssemblyOptions& options) {
  const int min_order = MinOrder(lp);
  if (order < min_order) {
    throw OrderTooSmall("relaxation order " + std::to_string(order) + " is below the minimum " +
                        std::to_string(min_order));
  }
  if (const auto violations = ValidateLp(lp); !violations.empty()) {
    std::string msg = "invalid measure LP:";
    for (const auto& v : violations) msg += " [" + v.ToString() + "]";
    throw InvalidProblem(msg);
  }

  MomentRelaxation rel;
  rel.order = order;
  rel.source = lp;
  const int nm = static_cast<int>(lp.measures.size());
  for (int i = 0; i < nm; ++i) {
    const auto& s = lp.measures[i];
    std::array<double, kNumVars> off{};
    std::array<double, kNumVars> fac;
    fac.fill(1.0);
    if (options.rescale) {
      for (Var v : {Var::kT, Var::kX}) {
        double lo = 0;
        double hi = 0;
        if (std::find(s.variables.begin(), s.variables.end(), v) != s.variables.end() &&
            FindBox(s, v, &lo, &hi) && hi > lo) {
          off[static_cast<int>(v)] = 0.5 * (lo + hi);
          fac[static_cast<int>(v)] = 0.5 * (hi - lo);
        }
      }
    }
    rel.scale_offset.push_back(off);
    rel.scale_factor.push_back(fac);
    rel.indices.emplace_back(s.variables, 2 * order);
    rel.offsets.push_back(rel.num_moments);
    rel.num_moments += rel.indices.back().size();
  }

  // L_i(q) for q already in scaled coordinates.
  const auto scaled_form = [&](int i, const Polynomial& q) {
    FormBuilder fb;
    for (const auto& [m, c] : q.terms()) fb.Add(rel.offsets[i] + rel.indices[i].position(m), c);
    return fb.Build();
  };
  const auto to_scaled = [&](int i, const Polynomial& p) {
    Polynomial q = p;
    for (Var v : {Var::kT, Var::kX}) {
      const int k = static_cast<int>(v);
      if (rel.scale_offset[i][k] != 0.0 || rel.scale_factor[i][k] != 1.0) {
        q = Substitute(q, v, Polynomial(rel.scale_offset[i][k]) +
                                 Polynomial(rel.scale_factor[i][k]) * Polynomial(v));
      }
    }
    return q;
  };
  // With a single equality h, monomials divisible by its leading monomial are
  // redundant modulo h once every L(h m), deg(h m) <= 2d, vanishes. Dropping
  // them keeps the matrices equivalent but gives them an interior, which the
  // solver needs (otherwise the certificate side is not attained).
  std::vector<std::optional<Monomial>> leading(nm);
  for (int i = 0; i < nm; ++i) {
    if (lp.measures[i].equalities.size() == 1) {
      leading[i] = lp.measures[i].equalities[0].terms().rbegin()->first;
    }
  }
  const auto reduced_basis = [&](int i, int degree) {
    auto basis = MomentIndex::MonomialsUpTo(lp.measures[i].variables, degree);
    if (!leading[i]) return basis;
    const auto& lead = leading[i]->exponents();
    std::erase_if(basis, [&](const Monomial& m) {
      for (int k = 0; k < kNumVars; ++k) {
        if (m.exponents()[k] < lead[k]) return false;
      }
      return true;
    });
    return basis;
  };
  const auto localizing = [&](int i, const Polynomial& g, const std::string& label) {
    const int dg = order - CeilHalf(g.total_degree());
    const auto basis = reduced_basis(i, dg);
    PsdBlock blk;
    blk.measure = i;
    blk.label = label;
    blk.side = static_cast<int>(basis.size());
    blk.entries.resize(static_cast<std::size_t>(blk.side) * blk.side);
    for (int p = 0; p < blk.side; ++p) {
      for (int q = p; q < blk.side; ++q) {
        const LinearForm f = scaled_form(i, g * Polynomial(basis[p] * basis[q], 1.0));
        blk.entries[static_cast<std::size_t>(p) * blk.side + q] = f;
        blk.entries[static_cast<std::size_t>(q) * blk.side + p] = f;
      }
    }
    return blk;
  };

  for (int i = 0; i < nm; ++i) {
    const auto& s = lp.measures[i];
    const std::string tag = "ν" + std::to_string(i);
    rel.psd_blocks.push_back(localizing(i, Polynomial(1.0), "moment " + tag));
    for (std::size_t g = 0; g < s.inequalities.size(); ++g) {
      rel.psd_blocks.push_back(localizing(i, Normalized(to_scaled(i, s.inequalities[g])),
                                          "localizing " + tag + " " + s.inequalities[g].ToString()));
    }
    for (const auto& h_orig : s.equalities) {
      const Polynomial h = Normalized(to_scaled(i, h_orig));
      for (const auto& m : MomentIndex::MonomialsUpTo(s.variables, 2 * order - h.total_degree())) {
        rel.affine_rows.push_back({"equality " + tag + " (" + h_orig.ToString() + ")*" + m.ToString(),
                                   scaled_form(i, h * Polynomial(m, 1.0)), Relation::kEq, 0.0});
      }
    }
  }

  for (const auto& row : lp.rows) {
    FormBuilder fb;
    for (const auto& term : row.terms) {
      for (const auto& [pos, c] : scaled_form(term.measure, to_scaled(term.measure, term.poly)).terms) {
        fb.Add(pos, c);
      }
    }
    rel.affine_rows.push_back({row.label, fb.Build(), row.relation, row.rhs});
  }

  FormBuilder obj;
  for (const auto& term : lp.objective) {
    for (const auto& [pos, c] : scaled_form(term.measure, to_scaled(term.measure, term.poly)).terms) {
      obj.Add(pos, c);
    }
  }
  rel.objective = obj.Build();
  return rel;
}

Eigen::MatrixXd LocalizingMatrix(const Eigen::VectorXd& moments, const MomentIndex& index,
                                 const Polynomial& g, int d) {
  const auto basis = MomentIndex::MonomialsUpTo(index.variables(), d - CeilHalf(g.total_degree()));
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd m(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = p; q < n; ++q) {
      double v = 0.0;
      for (const auto& [mono, c] : g.terms()) v += c * moments(index.position(mono * basis[p] * basis[q]));
      m(p, q) = v;
      m(q, p) = v;
    }
  }
  return m;
}

Eigen::MatrixXd MomentMatrix(const Eigen::VectorXd& moments, const MomentIndex& index, int d) {
  return LocalizingMatrix(moments, index, Polynomial(1.0), d);
}

int NumericalRank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
  const double cutoff = tol * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

bool FlatnessCheck(const Eigen::VectorXd& moments, const MomentIndex& index, int d, double tol) {
  if (d < 1) return true;
  const Eigen::MatrixXd md = MomentMatrix(moments, index, d);
  // M_{d-1} is the leading principal block (graded order).
  const int n1 = index.CountUpTo(d - 1);
  return NumericalRank(md, tol) == NumericalRank(md.topLeftCorner(n1, n1), tol);
}

SdpStandardForm ToStandardForm(const MomentRelaxation& rel) {
  SdpStandardForm form;
  int slacks = 0;
  for (const auto& row : rel.affine_rows) {
    if (row.relation == Relation::kLe) ++slacks;
  }
  form.num_vars = rel.num_moments + slacks;
  form.num_slacks = slacks;
  form.objective.assign(form.num_vars, 0.0);
  for (const auto& [pos, c] : rel.objective.terms) form.objective[pos] += c;

  const auto to_entries = [](const LinearForm& f, int i, int j, std::vector<SdpEntry>* out) {
    if (f.constant != 0.0) out->push_back({kConstantTerm, i, j, f.constant});
    for (const auto& [pos, c] : f.terms) out->push_back({pos, i, j, c});
  };
  for (const auto& blk : rel.psd_blocks) {
    PsdMap map;
    map.label = blk.label;
    map.side = blk.side;
    for (int i = 0; i < blk.side; ++i) {
      for (int j = i; j < blk.side; ++j) to_entries(blk.at(i, j), i, j, &map.entries);
    }
    form.blocks.push_back(std::move(map));
  }
  int slack = rel.num_moments;
  for (const auto& row : rel.affine_rows) {
    SparseRow sr;
    sr.coeffs = row.form.terms;
    sr.rhs = row.rhs - row.form.constant;
    if (row.relation == Relation::kLe) {
      sr.coeffs.emplace_back(slack, 1.0);
      form.blocks.push_back({"slack " + row.label, 1, {{slack, 0, 0, 1.0}}});
      ++slack;
    }
    form.equalities.push_back(std::move(sr));
  }
  return form;
}

SolveReport SolveRelaxation(const MomentRelaxation& rel, const SolverSettings& settings) {
  SolveReport rep;
  rep.order = rel.order;
  const auto start = std::chrono::steady_clock::now();
  const SdpStandardForm form = ToStandardForm(rel);
  BackendSolution sol;
  try {
    sol = Solve(form, settings);
  } catch (const SolverFailure&) {
    rep.status = SolveStatus::kNumericalError;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.status = sol.status;
  rep.iterations = sol.iterations;
  rep.raw = sol.y.head(rel.num_moments);
  rep.lower_bound = rel.objective.Evaluate(rep.raw);

  double residual = 0.0;
  for (const auto& row : rel.affine_rows) {
    const double v = row.form.Evaluate(rep.raw) - row.rhs;
    residual = std::max(residual, row.relation == Relation::kEq ? std::abs(v) : std::max(0.0, v));
  }
  rep.row_residual_inf = residual;

  double lmin = std::numeric_limits<double>::infinity();
  for (const auto& blk : form.blocks) {
    const Eigen::MatrixXd m = EvaluateBlock(blk, sol.y);
    lmin = std::min(lmin, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
                              .eigenvalues()(0));
  }
  rep.psd_min_eig = lmin;

  rep.flat = true;
  for (int i = 0; i < static_cast<int>(rel.indices.size()); ++i) {
    rep.flat = rep.flat && FlatnessCheck(rel.MeasureMoments(rep.raw, i), rel.indices[i], rel.order,
                                         kFlatnessTolerance);
    rep.moments.push_back(rel.OriginalMoments(rep.raw, i));
  }
  return rep;
}

}  // namespace homocp
