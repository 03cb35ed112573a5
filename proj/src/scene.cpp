#include "vqa/scene.hpp"

#include <algorithm>
#include <set>

#include "vqa/error.hpp"

namespace vqa {

namespace {

std::string pair_key(std::string_view a, std::string_view b)
{
    std::string key(a);
    key += '\0';
    key += b;
    return key;
}

const std::string& require_word(const nlohmann::json& v, const std::string& what)
{
    if (!v.is_string())
        throw MalformedScene(what + " must be a string");
    const auto& s = v.get_ref<const std::string&>();
    if (!is_constant_word(s))
        throw MalformedScene(what + " '" + s + "' is not a lowercase word");
    return s;
}

} // namespace

SceneGraph scene_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw MalformedScene("scene must be a JSON object");
    SceneGraph scene;
    const auto objects = doc.find("objects");
    if (objects == doc.end() || !objects->is_array())
        throw MalformedScene("scene has no 'objects' array");

    const auto n = static_cast<ObjectId>(objects->size());
    std::set<ObjectId> seen;
    for (std::size_t i = 0; i < objects->size(); ++i) {
        const auto& o = (*objects)[i];
        const std::string where = "objects[" + std::to_string(i) + "]";
        if (!o.is_object())
            throw MalformedScene(where + " is not an object");
        ObjectRecord rec;
        rec.id = static_cast<ObjectId>(i);
        if (auto id = o.find("id"); id != o.end()) {
            if (!id->is_number_integer())
                throw MalformedScene(where + ".id must be an integer");
            rec.id = id->get<ObjectId>();
            if (rec.id < 0 || rec.id >= n)
                throw MalformedScene(where + ".id " + std::to_string(rec.id) + " out of range");
        }
        if (!seen.insert(rec.id).second)
            throw MalformedScene("duplicate object id " + std::to_string(rec.id));

        if (auto attrs = o.find("attributes"); attrs != o.end() && attrs->is_object()) {
            for (const auto& [type, value] : attrs->items()) {
                if (!is_constant_word(type))
                    throw MalformedScene(where + ": attribute type '" + type + "' is not a word");
                rec.attributes[type] = require_word(value, where + "." + type);
            }
        } else {
            for (auto type : clevr_attribute_types) {
                std::string key(type);
                auto v = o.find(key);
                if (v == o.end())
                    throw MalformedScene(where + " is missing attribute '" + key + "'");
                rec.attributes[key] = require_word(*v, where + "." + key);
            }
        }
        scene.objects.push_back(std::move(rec));
    }
    std::sort(scene.objects.begin(), scene.objects.end(),
              [](const ObjectRecord& a, const ObjectRecord& b) { return a.id < b.id; });

    if (auto rels = doc.find("relationships"); rels != doc.end() && !rels->is_null()) {
        if (!rels->is_object())
            throw MalformedScene("'relationships' must be an object");
        std::set<RelationEdge> edges;
        for (const auto& [name, lists] : rels->items()) {
            if (!is_constant_word(name))
                throw MalformedScene("relation name '" + name + "' is not a word");
            if (!lists.is_array() || static_cast<ObjectId>(lists.size()) != n)
                throw MalformedScene("relationships." + name + " must hold one list per object");
            for (std::size_t i = 0; i < lists.size(); ++i) {
                if (!lists[i].is_array())
                    throw MalformedScene("relationships." + name + "[" + std::to_string(i) +
                                         "] is not an array");
                for (const auto& j : lists[i]) {
                    if (!j.is_number_integer())
                        throw MalformedScene("relationships." + name + " holds a non-integer");
                    auto other = j.get<ObjectId>();
                    if (other < 0 || other >= n) {
                        throw MalformedScene("relationships." + name + "[" + std::to_string(i) +
                                             "] index " + std::to_string(other) + " out of range");
                    }
                    edges.insert({other, static_cast<ObjectId>(i), name});
                }
            }
        }
        scene.relations.assign(edges.begin(), edges.end());
    }
    return scene;
}

FactBase FactBase::from_scene(const SceneGraph& scene)
{
    FactBase fb;
    std::vector<const ObjectRecord*> sorted;
    for (const auto& o : scene.objects)
        sorted.push_back(&o);
    std::sort(sorted.begin(), sorted.end(),
              [](const ObjectRecord* a, const ObjectRecord* b) { return a->id < b->id; });

    for (const auto* o : sorted) {
        if (o->id < 0)
            throw MalformedScene("negative object id");
        if (!fb.universe_.empty() && fb.universe_.back() == o->id)
            throw MalformedScene("duplicate object id " + std::to_string(o->id));
        fb.universe_.push_back(o->id);
    }

    for (const auto* o : sorted) {
        Term id = Term::integer(o->id);
        fb.objects_.push_back(Atom::make("object", {id}));
        for (const auto& [type, value] : o->attributes) {
            if (!is_constant_word(type) || !is_constant_word(value))
                throw MalformedScene("attribute " + type + "=" + value + " is not a word pair");
            fb.values_.emplace(std::pair{o->id, type}, value);
            fb.attributes_.push_back(
                Atom::make("attribute", {id, Term::constant(type), Term::constant(value)}));
            std::size_t pos = fb.attributes_.size() - 1;
            fb.attr_by_id_[id.text()].push_back(pos);
            fb.attr_by_type_[type].push_back(pos);
            fb.attr_by_type_value_[pair_key(type, value)].push_back(pos);
        }
    }

    std::set<RelationEdge> edges(scene.relations.begin(), scene.relations.end());
    for (const auto& e : edges) {
        if (!fb.contains(e.subject) || !fb.contains(e.object))
            throw MalformedScene("relation " + e.name + " names an unknown object");
        if (!is_constant_word(e.name))
            throw MalformedScene("relation name '" + e.name + "' is not a word");
        Term s = Term::integer(e.subject);
        Term o = Term::integer(e.object);
        fb.relations_.push_back(Atom::make("relation", {s, o, Term::constant(e.name)}));
        std::size_t pos = fb.relations_.size() - 1;
        fb.rel_by_subject_[s.text()].push_back(pos);
        fb.rel_by_object_[o.text()].push_back(pos);
        fb.rel_by_name_[e.name].push_back(pos);
    }
    return fb;
}

bool FactBase::contains(ObjectId id) const noexcept
{
    return std::binary_search(universe_.begin(), universe_.end(), id);
}

std::optional<std::string_view> FactBase::attribute_value(ObjectId id, std::string_view type) const
{
    auto it = values_.find(std::pair{id, std::string(type)});
    if (it == values_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Atom> FactBase::all_facts() const
{
    std::vector<Atom> out(objects_.begin(), objects_.end());
    out.insert(out.end(), attributes_.begin(), attributes_.end());
    out.insert(out.end(), relations_.begin(), relations_.end());
    return out;
}

std::vector<Atom> FactBase::facts_of(const Atom& pattern) const
{
    std::vector<Atom> out;
    auto keep_matching = [&](const std::vector<Atom>& facts, const std::vector<std::size_t>* positions) {
        if (positions == nullptr) {
            for (const auto& f : facts) {
                if (unify(pattern, f))
                    out.push_back(f);
            }
            return;
        }
        for (std::size_t pos : *positions) {
            if (unify(pattern, facts[pos]))
                out.push_back(facts[pos]);
        }
    };
    auto lookup = [](const Index& index, const std::string& key) -> const std::vector<std::size_t>* {
        static const std::vector<std::size_t> none;
        auto it = index.find(key);
        return it == index.end() ? &none : &it->second;
    };

    const auto& a = pattern.args();
    switch (pattern.kind()) {
    case PredicateKind::object:
        keep_matching(objects_, nullptr);
        break;
    case PredicateKind::attribute:
        if (a[0].is_constant())
            keep_matching(attributes_, lookup(attr_by_id_, a[0].text()));
        else if (a[1].is_constant() && a[2].is_constant())
            keep_matching(attributes_, lookup(attr_by_type_value_, pair_key(a[1].text(), a[2].text())));
        else if (a[1].is_constant())
            keep_matching(attributes_, lookup(attr_by_type_, a[1].text()));
        else
            keep_matching(attributes_, nullptr);
        break;
    case PredicateKind::relation:
        if (a[0].is_constant())
            keep_matching(relations_, lookup(rel_by_subject_, a[0].text()));
        else if (a[1].is_constant())
            keep_matching(relations_, lookup(rel_by_object_, a[1].text()));
        else if (a[2].is_constant())
            keep_matching(relations_, lookup(rel_by_name_, a[2].text()));
        else
            keep_matching(relations_, nullptr);
        break;
    default:
        throw UnknownPredicate("no stored facts for predicate '" + pattern.predicate() + "'");
    }
    return out;
}

FactBase ingest_scene(const nlohmann::json& doc) { return FactBase::from_scene(scene_from_json(doc)); }

SceneGraph relabel(const SceneGraph& scene, std::span<const ObjectId> perm)
{
    auto map = [&](ObjectId id) { return perm[static_cast<std::size_t>(id)]; };
    SceneGraph out;
    for (const auto& o : scene.objects)
        out.objects.push_back({map(o.id), o.attributes});
    std::sort(out.objects.begin(), out.objects.end(),
              [](const ObjectRecord& a, const ObjectRecord& b) { return a.id < b.id; });
    for (const auto& e : scene.relations)
        out.relations.push_back({map(e.subject), map(e.object), e.name});
    std::sort(out.relations.begin(), out.relations.end());
    return out;
}

} // namespace vqa
