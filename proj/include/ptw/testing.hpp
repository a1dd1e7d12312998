#pragma once

#include <string>

#include "ptw/dyadic.hpp"
#include "ptw/operators.hpp"

namespace ptw {

/// Reading of the hatted triple in the forward testing condition.
/// HatOfTriple is the region 3I x [0, 3 l(I)] (the default); TripleOfHat
/// triples the base only and keeps the box height, 3I x [0, l(I)].
enum class HatConvention { HatOfTriple, TripleOfHat };

const char* to_string(HatConvention h);
HatConvention hat_from_string(const std::string& s);

struct TestingOptions {
  HatConvention hat = HatConvention::HatOfTriple;
  double tol_norm = 1e-10;
  int max_iters = 10000;
  double eps_num = 1e-9;        // slack separating fp noise from genuine failures
  double ratio_ceiling = 100.0; // empirical bound asserted on N / (F + B)
  int max_level = -1;           // cube enumeration depth; -1 means the grid depth
};

struct ConstantResult {
  double value = 0.0;
  DyadicCube achiever;
  bool found = false;  // false when no cube yields an admissible quotient
};

/// Forward testing constant: F^2 is the maximum over dyadic cubes I with
/// sigma(I) > 0 of the mu-integral of (P_sigma 1_I)^2 over the hatted triple
/// of I, divided by sigma(I).  Throws when sigma is empty.
ConstantResult forward_constant(const Grid& grid, const DiscreteMeasure& sigma,
                                const UpperHalfMeasure& mu, const OperatorMatrix& op,
                                const TestingOptions& opts = {});

/// Backward testing constant: B^2 is the maximum over dyadic cubes I whose
/// box carries positive t^2 mu mass of the sigma-integral of
/// (P*_mu (t 1_{I-hat}))^2 over 3I, divided by that box mass.  Throws when
/// mu is empty.
ConstantResult backward_constant(const Grid& grid, const DiscreteMeasure& sigma,
                                 const UpperHalfMeasure& mu, const OperatorMatrix& op,
                                 const TestingOptions& opts = {});

struct TestingReport {
  Params params;
  std::uint64_t seed = 0;
  int n_sigma = 0;
  int n_mu = 0;
  HatConvention hat = HatConvention::HatOfTriple;

  NormResult norm;
  double N = 0.0;
  double F = 0.0;
  double B = 0.0;
  std::string F_achiever = "none";
  std::string B_achiever = "none";

  double ratio = 0.0;   // N / (F + B)
  double F_over_N = 0.0;
  double B_over_N = 0.0;

  bool necessity_ok = false;  // F <= N (1+eps) and B <= N (1+eps)
  bool ratio_ok = false;      // ratio <= ceiling
  bool ok() const { return necessity_ok && ratio_ok; }
};

/// Computes N, F, B for one instance and checks necessity at eps_num.
TestingReport verify(const Params& params, const DiscreteMeasure& sigma,
                     const UpperHalfMeasure& mu, const TestingOptions& opts = {});

}  // namespace ptw
