#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "men/men_graph.hpp"
#include "men/state.hpp"

namespace men {

/// JSON text: {"n": n, "amplitudes": [[re, im], ...]} in MSB-first index order, 17 significant digits.
std::string state_to_json(const PureState& psi);
/// Renormalizes when the norm is within 1e-6 of 1; otherwise throws InvalidState. Throws FileFormat on bad syntax.
PureState state_from_json(std::string_view text);

/// JSON text with n, edges, reference, reference_modulus, log_reference_modulus and per-node q tables.
std::string model_to_json(const MenModel& model);
/// Parses and validates a model; throws FileFormat or InvalidModel.
MenModel model_from_json(std::string_view text, const ToleranceConfig& tol = {});

enum class FileKind { state, model };
/// A document with an "amplitudes" key is a state, one with "q" a model.
FileKind detect_kind(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace men
