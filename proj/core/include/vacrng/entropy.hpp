#pragma once

#include "vacrng/binning.hpp"

#include <span>
#include <string>
#include <vector>

namespace vacrng {

/// Probabilities summing to 1 (within 1e-12), all non-negative.
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<double> probabilities);

    std::span<const double> probabilities() const noexcept { return p_; }
    std::size_t             size() const noexcept { return p_.size(); }

private:
    std::vector<double> p_;
};

/// Shannon entropy in bits; zero-probability outcomes contribute nothing.
double shannon(const DiscreteDistribution& dist);
/// log2(1 / max p).
double min_entropy(const DiscreteDistribution& dist);

struct ConditionalEntropies {
    double shannon = 0.0; ///< H1(X|Y), weighted by p(y)
    double min     = 0.0; ///< Hinf(X|Y), worst case over y and x
};

/// Rows are p(x|y) for each y; weights are p(y). A row with zero weight still counts for the
/// min-entropy, which does not depend on the weights.
ConditionalEntropies conditional_entropies(std::span<const std::vector<double>> rows, std::span<const double> weights);

/// Per-component standard deviations of one frequency bin. sigma_q() follows from additivity of
/// the independent variances: sigma_T^2 = sigma_K^2 + sigma_Q^2.
struct GaussianChannelParams {
    double sigma_t = 0.0;
    double sigma_k = 0.0;

    double sigma_q() const;
    void   validate() const; ///< throws DataError unless sigma_t > sigma_k > 0
};

/// Conditional Shannon entropy of n-bit equal-area words given the electronic noise:
/// n - log2(sigma_T / sigma_Q). Valid in the many-small-bins regime, so n >= 6 is required.
double equal_area_cond_shannon(const GaussianChannelParams& params, int bits);

/// The same, for a fixed electronic-noise value k:
/// n - log2((sigma_T/sigma_Q) * exp(-(sigma_K^2 - k^2) / (2 sigma_T^2))).
double equal_area_cond_shannon_given_k(const GaussianChannelParams& params, int bits, double k);

struct EqualAreaLosses {
    double drift = 0.0; ///< (drift_rel)^2 / ln 2
    double refit = 0.0; ///< (n / 2m) log2((2 pi / e)(m / n))
};

EqualAreaLosses equal_area_extra_losses(double drift_rel, int bits, double ensemble_size);

/// Worst-case conditional min-entropy of equal-area words (boundaries at the N(0, sigma_T) quantiles)
/// when the electronic noise is known and bounded by |k| <= k_bound. Unbounded k drives this to 0.
double equal_area_cond_min_entropy(const GaussianChannelParams& params, int bits, double k_bound);

/// Word distribution of cyclic binning applied to N(shift, sigma^2).
std::vector<double> cyclic_word_distribution(double sigma, const CyclicBinning& binning, double shift);

/// Conditional entropies of cyclic words when the quantum part is N(k, sigma_Q^2) and k is known.
/// Shannon: average over the shift k mod b (uniform when sigma_K >> b). Min: worst shift, i.e. the
/// wrapped Gaussian's mode centred in a cell.
ConditionalEntropies cyclic_cond_entropies(double sigma_q, const CyclicBinning& binning);

/// max(0, H1(T) - H1(K)): the mutual-information lower bound on H1(T|K).
double shannon_lower_bound_via_mutual_info(double h1_total, double h1_dark);

/// max(0, Hmin_total - 2 log2(1/epsilon)), epsilon in (0, 1].
double extractable_bits(double hmin_cond_total, double epsilon);

enum class BinningScheme { cyclic, equal_area };

std::string_view to_string(BinningScheme scheme) noexcept;
BinningScheme    binning_scheme_from_string(std::string_view s);

/// Per frequency bin; all entropies are bits per value (one Re or one Im component).
struct EntropyRecord {
    std::size_t bin     = 0;
    double      freq_hz = 0.0;
    double      h1        = 0.0;
    double      hmin      = 0.0;
    double      h1_cond   = 0.0;
    double      hmin_cond = 0.0;
    double      extractable_bits = 0.0; ///< min-entropy this bin adds per block (Re + Im)
};

struct EntropyReport {
    BinningScheme              scheme    = BinningScheme::cyclic;
    int                        word_bits = 16;
    std::vector<EntropyRecord> records;

    /// Throws DataError when any record breaks 0 <= Hmin_cond <= H1_cond <= n.
    void check_invariants() const;
};

struct CalibratedBin {
    std::size_t           bin     = 0;
    double                freq_hz = 0.0;
    GaussianChannelParams params;
};

struct CyclicSettings {
    int    bits               = 16;
    double period_over_sigma  = 0.5; ///< B = period_over_sigma * sigma_Q per bin
    double offset             = 0.0;
};

struct EqualAreaSettings {
    int    bits          = 8;
    double drift_rel     = 0.0;
    double ensemble_size = 5e5;
    double k_bound_sigmas = 5.0; ///< adversary's electronic value limited to |k| <= this * sigma_K
};

/// Cyclic binning for one calibrated bin.
CyclicBinning cyclic_binning_for(const GaussianChannelParams& params, const CyclicSettings& settings);

EntropyReport entropy_report(std::span<const CalibratedBin> bins, const CyclicSettings& settings);
EntropyReport entropy_report(std::span<const CalibratedBin> bins, const EqualAreaSettings& settings);

} // namespace vacrng
