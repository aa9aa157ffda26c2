#pragma once

#include <stdexcept>
#include <string>

#include "matpg/evolution.hpp"

namespace matpg {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes the full engine state (vertex table, programs, roots, config,
/// generation counter) as canonical JSON; program constants are serialized
/// as hexadecimal floats so round-trips are bit-exact. The write is atomic:
/// a temporary file is renamed into place.
void save_checkpoint(const EngineState& state, const std::string& path);

/// Loads and validates a checkpoint. Corrupt or version-mismatched files
/// throw CheckpointError and leave no partial state behind.
EngineState load_checkpoint(const std::string& path);

std::string checkpoint_to_json(const EngineState& state);
EngineState checkpoint_from_json(const std::string& text);

}  // namespace matpg
