#pragma once

// JSON containers for trained models. Every container carries "format" and
// "version" keys; doubles are written in shortest round-trip form, so a
// save/load cycle reproduces each value bit for bit.

#include <json.hpp>

#include "unfollow/embeddings.h"
#include "unfollow/mlp.h"
#include "unfollow/topic_model.h"

namespace unfollow {

nlohmann::json topic_model_to_json(const TopicModel& model);
TopicModel topic_model_from_json(const nlohmann::json& j);

nlohmann::json embedding_model_to_json(const EmbeddingModel& model);
EmbeddingModel embedding_model_from_json(const nlohmann::json& j);

nlohmann::json mlp_to_json(const MlpModel& model);
MlpModel mlp_from_json(const nlohmann::json& j);

// Throws SchemaError unless j["format"] == format and j["version"] == version.
void check_container(const nlohmann::json& j, const char* format, int version);

nlohmann::json read_json(std::istream& in, const char* what);

}  // namespace unfollow
