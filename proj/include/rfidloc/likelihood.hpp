#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rfidloc/phase_model.hpp"

namespace rfidloc {

enum class Variant { NLF, CLF, SLF };

/// Consecutive differencing: pairs (n, n-1).
struct Misaligned {
  friend bool operator==(const Misaligned&, const Misaligned&) = default;
};
/// Differencing against one fixed sample: pairs (n, index), n != index.
/// `index` is a position in the ordered sample list.
struct Reference {
  std::size_t index = 0;
  friend bool operator==(const Reference&, const Reference&) = default;
};
using DifferentialScheme = std::variant<Misaligned, Reference>;

/// How the 2pi ambiguity of the modelled phase difference is resolved when the
/// true sign of the difference is unknown.
enum class Branch { NonNegative, Negative, NearestToMeasured };

class LikelihoodSpec {
 public:
  /// Throws SpecError when `weighted` is combined with NLF.
  LikelihoodSpec(Variant variant, DifferentialScheme scheme, bool weighted = false,
                 Branch nlf_branch = Branch::NearestToMeasured);

  Variant variant() const { return variant_; }
  const DifferentialScheme& scheme() const { return scheme_; }
  bool weighted() const { return weighted_; }
  Branch nlf_branch() const { return nlf_branch_; }

  /// Short name such as "wslf/reference:0".
  std::string label() const;

  friend bool operator==(const LikelihoodSpec&, const LikelihoodSpec&) = default;

 private:
  Variant variant_;
  DifferentialScheme scheme_;
  bool weighted_;
  Branch nlf_branch_;
};

struct DifferentialPair {
  double dphi_measured = 0.0;  // phi_m[n] - phi_m[ref], not re-wrapped
  double ddist = 0.0;          // d[n] - d[ref] for the candidate, meters
  std::size_t n = 0;
  std::size_t ref = 0;
};

/// Pairs for `candidate` under `scheme`. Throws DataError for fewer than two
/// samples, mixed carriers or an out-of-range reference.
std::vector<DifferentialPair> build_differentials(std::span<const PhaseSample> samples,
                                                  const Position3D& candidate,
                                                  const DifferentialScheme& scheme);

/// Modelled phase difference under the fine-sampling condition
/// |4 pi ddist / lambda| < 2pi, choosing the 2pi correction from the signs of
/// (ddist, dphi_measured). Returns nullopt when the condition does not hold.
std::optional<double> delta_phi_d_unwrap(double ddist, double dphi_measured, double wavelength);

/// Modelled phase difference wrap(4 pi ddist / lambda), shifted by -2pi on the
/// negative branch. `dphi_measured` is only read for NearestToMeasured.
double delta_phi_d_mod(double ddist, double wavelength, Branch branch, double dphi_measured = 0.0);

/// dphi_measured - 4 pi ddist / lambda.
double residual(const DifferentialPair& pair, double wavelength);

double nlf_term(const DifferentialPair& pair, double wavelength, Branch branch);
double clf_term(const DifferentialPair& pair, double wavelength);
double slf_term(const DifferentialPair& pair, double wavelength);

/// Per-pair weight in [0,1]: |cos r| for CLF, exp(-sin^2 r) for SLF.
/// Throws SpecError for NLF.
double weight(const DifferentialPair& pair, double wavelength, Variant variant);

/// Sum of (weighted) likelihood terms over the pairs of `spec.scheme()`.
double objective(std::span<const PhaseSample> samples, const Position3D& candidate,
                 const LikelihoodSpec& spec, double wavelength);

/// Same as above with d[n] = distance(pose_n, candidate) precomputed.
/// Performs no validation; callers check the sample set once up front.
double objective_from_distances(std::span<const PhaseSample> samples, std::span<const double> distances,
                                const LikelihoodSpec& spec, double wavelength);

/// Throws DataError if `samples` cannot be used with `scheme` (see build_differentials).
void check_sample_set(std::span<const PhaseSample> samples, const DifferentialScheme& scheme);

}  // namespace rfidloc
