#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace swingid {

// Welch-averaged frequency response estimate between two equally long series.
struct FrfResult {
  std::vector<double> freq;             // Hz, DC .. fs/2
  std::vector<std::complex<double>> h;  // H1 = S_xy / S_xx per bin
  std::vector<double> coherence;        // magnitude-squared coherence per bin
  double low_freq_gain = 0.0;           // mean |H| over the lowest bins above DC
  double bandwidth_hz = 0.0;  // first -3 dB crossing vs low_freq_gain; NaN if
                              // |H| never drops below it in band
  std::size_t segments = 0;

  double gain_db(std::size_t bin) const;
};

// Hann-windowed Welch cross/auto spectra with the given segment length and
// overlap (in samples). Needs at least two full segments; throws
// AnalysisError when the input carries no power. Bins with negligible input
// power get H = 0 and are skipped by the bandwidth scan.
FrfResult frf_welch(const std::vector<double>& input,
                    const std::vector<double>& output, double fs,
                    std::size_t window = 5000, std::size_t overlap = 50);

}  // namespace swingid
