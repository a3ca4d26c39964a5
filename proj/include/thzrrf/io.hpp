// SPDX-License-Identifier: Apache-2.0
//
// On-disk formats. All binary formats are little-endian.
//
// Spectrum sample ("THZSPEC1"):
//   char[8]  magic "THZSPEC1"
//   int32    rows (elevation bins), int32 cols (azimuth bins), int32 channel count (= 4)
//   float64  rx position x, y, z; rx orientation quaternion w, x, y, z
//   float32  rows*cols row-major planes: gain (linear), tof (s), aod_az (rad), aod_el (rad)
//
// Field checkpoint ("THZRRF01"):
//   char[8]  magic "THZRRF01"
//   uint64   primitive count N
//   uint32   SH degree L, uint32 flags (bit 0: legacy calibration block present)
//   float64  carrier frequency (Hz), tx position x, y, z
//   float32  centers[3N], scales[3N], quaternions[4N] (w, x, y, z), densities[N],
//            SH coefficients[N * (L+1)^2] (primitive-major), [calibration depths[N]]
//
// CIR binary ("THZCIR01"):
//   char[8]  magic "THZCIR01"; uint64 tap count; float64 t0, Ts;
//   float32  taps as (delay_s, real, imag) triples

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thzrrf/channel.hpp"
#include "thzrrf/dataset.hpp"
#include "thzrrf/gaussian_field.hpp"
#include "thzrrf/renderer.hpp"

namespace thzrrf {

namespace fs = std::filesystem;

/// Raised for missing, unreadable or malformed files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes `bytes` to `path` via a temporary file and rename.
void write_file_atomic(const fs::path& path, const std::string& bytes);
std::string read_file(const fs::path& path);

/// 64-bit FNV-1a digest, rendered as "fnv1a64:<16 hex digits>".
std::string content_digest(const std::string& bytes);

std::string encode_spectrum(const SpatialSpectrum& s);
SpatialSpectrum decode_spectrum(const std::string& bytes);
void save_spectrum(const fs::path& path, const SpatialSpectrum& s);
SpatialSpectrum load_spectrum(const fs::path& path);

std::string encode_checkpoint(const GaussianField& field, const LegacyCalibration* calibration = nullptr);
struct Checkpoint {
    GaussianField field;
    std::optional<LegacyCalibration> calibration;
};
Checkpoint decode_checkpoint(const std::string& bytes);
void save_checkpoint(const fs::path& path, const GaussianField& field, const LegacyCalibration* calibration = nullptr);
Checkpoint load_checkpoint(const fs::path& path);

/// MPC list as CSV: amplitude,phase,delay,aoa_x,aoa_y,aoa_z,aod_x,aod_y,aod_z,facet,bounce_x,bounce_y,bounce_z
/// (bounce columns empty for line of sight). Values use round-trip precision.
std::string encode_mpcs(const std::vector<Mpc>& mpcs);
std::vector<Mpc> decode_mpcs(const std::string& text);

/// Dataset directory: manifest.json plus sample_NNNNN.spec / sample_NNNNN.mpc.csv.
struct DatasetManifest {
    int format_version = 1;
    int rows = 0;
    int cols = 0;
    std::vector<std::string> channels{"gain", "tof", "aod_az", "aod_el"};
    double carrier_frequency = 0.0;
    std::string scene_hash;
    std::vector<std::string> spectrum_files;
    std::vector<std::string> mpc_files;
};

void save_dataset(const fs::path& dir, const Dataset& data, double carrier_frequency, const std::string& scene_hash);
/// Loads a dataset directory. Throws IoError on a missing or inconsistent manifest.
Dataset load_dataset(const fs::path& dir, DatasetManifest* manifest = nullptr);
DatasetManifest load_manifest(const fs::path& dir);

std::string cir_to_text(const Cir& cir);
std::string cir_to_binary(const Cir& cir);

} // namespace thzrrf
