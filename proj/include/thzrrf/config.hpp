// SPDX-License-Identifier: Apache-2.0
//
// YAML scene and training configuration files. Unknown keys are rejected;
// errors carry the 1-based line and column of the offending node.
//
// Scene file:
//
//   materials:                 # list
//     - name: concrete
//       scattering_coefficient: 0.6   # S in [0, 1]
//       lobe_exponent: 4              # alpha_R >= 1
//       reflection_reduction: 0.8     # [0, 1], default 1
//   facets:                    # list
//     - vertices: [[0,0,0], [8,0,0], [0,6,0]]
//       shape: parallelogram          # triangle (default) | parallelogram
//       material: concrete
//       normal: [0, 0, 1]             # optional orientation hint
//   tx:
//     position: [1, 3, 1.5]
//     frequency: 300e9                # Hz, default 300 GHz
//   sampling_volume:                  # optional
//     min: [0.5, 0.5, 0.5]
//     max: [7.5, 5.5, 2.5]
//   tracing:                          # optional
//     sample_density: 400             # scatter points per m^2
//
// Training file (every key optional):
//
//   learning_rate: 0.05
//   epochs: 200
//   loss: l2_db                # l2_db | l1_db
//   db_floor: -160
//   seed: 1
//   batch_size: 4
//   optimizer: adam            # adam | sgd
//   mode: full_path            # full_path | legacy
//   checkpoint_every: 0
//   sh_decay: 0                # shrinkage of SH bands >= 1 per step
//   seeding: {spacing: 0.25, init_density: 1.0, init_scale: 0.15,
//             normal_scale_ratio: 0.1, init_gain: 0.01, sh_degree: 3}

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "thzrrf/gaussian_field.hpp"
#include "thzrrf/scene.hpp"
#include "thzrrf/trainer.hpp"

namespace thzrrf {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line, int column)
        : std::runtime_error(message), line_(line), column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

Scene parse_scene(const std::string& text);
/// Throws IoError when the file cannot be read, ConfigError (message
/// prefixed with "path:line:col: ") when it does not parse.
Scene load_scene(const std::filesystem::path& path);

struct TrainSettings {
    TrainConfig train;
    SeedParams seeding;
};

TrainSettings parse_train_settings(const std::string& text);
TrainSettings load_train_settings(const std::filesystem::path& path);

} // namespace thzrrf
