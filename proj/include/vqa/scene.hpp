#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "vqa/logic.hpp"

namespace vqa {

using ObjectId = std::int64_t;

struct ObjectRecord {
    ObjectId id = 0;
    std::map<std::string, std::string> attributes;
};

/// `subject` stands in relation `name` to `object` (subject is left of
/// object, ...).
struct RelationEdge {
    ObjectId subject = 0;
    ObjectId object = 0;
    std::string name;

    friend auto operator<=>(const RelationEdge&, const RelationEdge&) = default;
};

/// Objects are stored in id order; ids are 0..N-1.
struct SceneGraph {
    std::vector<ObjectRecord> objects;
    std::vector<RelationEdge> relations;
};

inline constexpr std::string_view clevr_attribute_types[] = {"size", "color", "material", "shape"};

/// Reads one scene record: `objects` (each with color/size/shape/material)
/// and `relationships` (relation name -> per-object index lists, where
/// entry j of list i means object j is in that relation to object i).
/// Throws MalformedScene.
SceneGraph scene_from_json(const nlohmann::json& doc);

/// Background knowledge for one scene: object/1, attribute/3 and
/// relation/3 groundings plus lookup indexes.
class FactBase {
public:
    FactBase() = default;

    /// Throws MalformedScene on duplicate ids, missing or non-functional
    /// attributes, or relations naming unknown objects.
    static FactBase from_scene(const SceneGraph& scene);

    std::span<const ObjectId> universe() const noexcept { return universe_; }
    bool contains(ObjectId id) const noexcept;
    std::optional<std::string_view> attribute_value(ObjectId id, std::string_view type) const;

    std::span<const Atom> object_facts() const noexcept { return objects_; }
    std::span<const Atom> attribute_facts() const noexcept { return attributes_; }
    std::span<const Atom> relation_facts() const noexcept { return relations_; }
    std::vector<Atom> all_facts() const;
    std::size_t size() const noexcept
    {
        return objects_.size() + attributes_.size() + relations_.size();
    }

    /// Stored facts unifiable with `pattern`, id-sorted. Throws
    /// UnknownPredicate unless the predicate is attribute, relation or
    /// object.
    std::vector<Atom> facts_of(const Atom& pattern) const;

private:
    using Index = std::unordered_map<std::string, std::vector<std::size_t>>;

    std::vector<ObjectId> universe_;
    std::vector<Atom> objects_;
    std::vector<Atom> attributes_;
    std::vector<Atom> relations_;
    // (id, type) -> value
    std::map<std::pair<ObjectId, std::string>, std::string, std::less<>> values_;

    Index attr_by_id_;
    Index attr_by_type_;
    Index attr_by_type_value_;
    Index rel_by_subject_;
    Index rel_by_object_;
    Index rel_by_name_;
};

/// Convenience wrapper: scene_from_json followed by FactBase::from_scene.
FactBase ingest_scene(const nlohmann::json& doc);

/// Applies the id bijection `perm` (old id -> new id) to a scene.
SceneGraph relabel(const SceneGraph& scene, std::span<const ObjectId> perm);

} // namespace vqa
