#pragma once

#include <cstdint>
#include <filesystem>

#include "core/types.hpp"

namespace agiplan {

struct GenParams {
  int nSats = 3;
  long long nGPs = 1660;
  Tick horizonSeconds = 21600;
  int anglesPerInstrument = 62;
  double meanChoicesPerTP = 51.0;
  double rainFraction = 0.015;
  long long rainRunLength = 2;  // contiguous GPs soaked per rain cell
  double saturationFraction = 0.10;
  double eclipseFraction = 0.20;
  int duplicationFactor = 3;
  int tpPerSat = 0;  // 0 = derived from nGPs at the reference TP/GP density
  double initialErrorMean = 0.005;
  double initialErrorSpread = 0.003;
  EnergyConfig energy;
  ErrorDynamics dynamics{2e-7, 0.012, 1.0};
};

// Writes the six raw scenario files plus config.json into outDir. The output
// is a deterministic function of (params, seed).
void generateScenario(const GenParams& params, std::uint64_t seed,
                      const std::filesystem::path& outDir);

// Measurement-error table generation only (meas_err.csv). Combined
// signatures usually, but not always, beat the single-instrument entries.
void emitMeasurementErrors(const GenParams& params, std::uint64_t seed,
                           const std::filesystem::path& file);

}  // namespace agiplan
