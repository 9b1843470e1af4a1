#pragma once

#include <string>
#include <vector>

#include "padbench/protocols.hpp"

namespace padbench {

// Resolves "name" or "name:param" to a built-in protocol, e.g. "grandtest",
// "cross_dataset:replay_attack", "one_pai:mask", "unseen_attack:replay",
// "unseen_device:webcam", "cross_face_resolution:lf_test",
// "cross_conditions:test_adverse".
ProtocolSpec protocol_from_name(const std::string& name);

// Parses a protocol config document (JSON text): either
//   {"builtin": "unseen_attack", "param": "replay"}
// or an explicit custom spec
//   {"name": "...", "train": PRED, "dev": PRED, "test": PRED,
//    "test_sources": ["train","dev","test"]?}
// where PRED is {"include": {field: [values...]}, "exclude": {...}}.
ProtocolSpec parse_protocol_config(const std::string& json_text);

ProtocolSpec load_protocol_config(const std::string& path);

std::string protocol_to_json(const ProtocolSpec& spec);

// Checks that every dataset_id referenced by the spec exists in the
// registry. Throws Error{config_error} otherwise.
void validate_protocol_spec(const ProtocolSpec& spec, const Registry& registry);

// Enumerates the members of a protocol family present in the registry.
// Families: grandtest, cross_dataset, one_pai, unseen_attack,
// unseen_device, cross_face_resolution, cross_conditions.
std::vector<ProtocolSpec> make_protocol_family(const Registry& registry,
                                               const std::string& family);

}  // namespace padbench
