// SPDX-License-Identifier: Apache-2.0

#include "thzrrf/config.hpp"

#include <initializer_list>
#include <map>

#include <yaml-cpp/yaml.h>

#include "thzrrf/io.hpp"

namespace thzrrf {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& message)
{
    const YAML::Mark m = node.Mark();
    throw ConfigError(message, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& node, const std::string& what)
{
    if (!node.IsMap())
        fail(node, what + ": expected a mapping");
}

void check_keys(const YAML::Node& node, const std::string& what, std::initializer_list<const char*> allowed)
{
    require_map(node, what);
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            fail(kv.first, what + ": unknown key '" + key + "'");
    }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& what)
{
    if (!node.IsScalar())
        fail(node, what + ": expected a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, what + ": invalid value '" + node.Scalar() + "'");
    }
}

Vec3 vec3(const YAML::Node& node, const std::string& what)
{
    if (!node.IsSequence() || node.size() != 3)
        fail(node, what + ": expected a list of three numbers");
    return {scalar<double>(node[0], what), scalar<double>(node[1], what), scalar<double>(node[2], what)};
}

const YAML::Node required(const YAML::Node& map, const char* key, const std::string& what)
{
    const YAML::Node n = map[key];
    if (!n)
        fail(map, what + ": missing key '" + std::string(key) + "'");
    return n;
}

YAML::Node parse_yaml(const std::string& text)
{
    try {
        return YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("syntax error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
    }
}

} // namespace

Scene parse_scene(const std::string& text)
{
    const YAML::Node root = parse_yaml(text);
    if (!root || root.IsNull())
        throw ConfigError("scene: empty document", 1, 1);
    check_keys(root, "scene", {"materials", "facets", "tx", "sampling_volume", "tracing"});

    Scene scene;
    std::map<std::string, std::size_t> material_ids;
    if (const YAML::Node mats = root["materials"]) {
        if (!mats.IsSequence())
            fail(mats, "materials: expected a list");
        for (const auto& m : mats) {
            check_keys(m, "material", {"name", "scattering_coefficient", "lobe_exponent", "reflection_reduction"});
            Material mat;
            mat.name = scalar<std::string>(required(m, "name", "material"), "material name");
            mat.scattering_coefficient =
                scalar<double>(required(m, "scattering_coefficient", "material"), "scattering_coefficient");
            mat.lobe_exponent = scalar<int>(required(m, "lobe_exponent", "material"), "lobe_exponent");
            if (m["reflection_reduction"])
                mat.reflection_reduction = scalar<double>(m["reflection_reduction"], "reflection_reduction");
            try {
                mat.validate();
            } catch (const std::invalid_argument& e) {
                fail(m, e.what());
            }
            if (!material_ids.emplace(mat.name, scene.materials.size()).second)
                fail(m, "material: duplicate name '" + mat.name + "'");
            scene.materials.push_back(mat);
        }
    }

    if (const YAML::Node facets = root["facets"]) {
        if (!facets.IsSequence())
            fail(facets, "facets: expected a list");
        for (const auto& f : facets) {
            check_keys(f, "facet", {"vertices", "shape", "material", "normal"});
            const YAML::Node verts = required(f, "vertices", "facet");
            if (!verts.IsSequence() || verts.size() != 3)
                fail(verts, "facet vertices: expected three points");
            const std::array<Vec3, 3> v{vec3(verts[0], "vertex"), vec3(verts[1], "vertex"), vec3(verts[2], "vertex")};
            FacetShape shape = FacetShape::triangle;
            if (const YAML::Node s = f["shape"]) {
                const auto name = scalar<std::string>(s, "facet shape");
                if (name == "parallelogram")
                    shape = FacetShape::parallelogram;
                else if (name != "triangle")
                    fail(s, "facet shape: expected 'triangle' or 'parallelogram'");
            }
            const YAML::Node mat = required(f, "material", "facet");
            const auto it = material_ids.find(scalar<std::string>(mat, "facet material"));
            if (it == material_ids.end())
                fail(mat, "facet: unknown material '" + mat.Scalar() + "'");
            std::optional<Vec3> hint;
            if (f["normal"])
                hint = vec3(f["normal"], "facet normal");
            try {
                scene.facets.push_back(make_facet(v, shape, it->second, hint));
            } catch (const std::invalid_argument& e) {
                fail(f, std::string("facet: ") + e.what());
            }
        }
    }

    const YAML::Node tx = required(root, "tx", "scene");
    check_keys(tx, "tx", {"position", "frequency"});
    scene.tx_position = vec3(required(tx, "position", "tx"), "tx position");
    if (tx["frequency"]) {
        scene.carrier_frequency = scalar<double>(tx["frequency"], "tx frequency");
        if (!(scene.carrier_frequency > 0.0))
            fail(tx["frequency"], "tx frequency: must be positive");
    }

    if (const YAML::Node vol = root["sampling_volume"]) {
        check_keys(vol, "sampling_volume", {"min", "max"});
        Aabb box{vec3(required(vol, "min", "sampling_volume"), "sampling_volume min"),
                 vec3(required(vol, "max", "sampling_volume"), "sampling_volume max")};
        if (box.min.x > box.max.x || box.min.y > box.max.y || box.min.z > box.max.z)
            fail(vol, "sampling_volume: min corner exceeds max corner");
        scene.sampling_volume = box;
    }
    if (const YAML::Node tr = root["tracing"]) {
        check_keys(tr, "tracing", {"sample_density"});
        if (tr["sample_density"]) {
            scene.facet_sample_density = scalar<double>(tr["sample_density"], "sample_density");
            if (!(scene.facet_sample_density > 0.0))
                fail(tr["sample_density"], "sample_density: must be positive");
        }
    }
    scene.validate();
    return scene;
}

namespace {

template <typename F>
auto with_path(const std::filesystem::path& path, F&& parse)
{
    const std::string text = read_file(path);
    try {
        return parse(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                              e.what(),
                          e.line(), e.column());
    }
}

} // namespace

Scene load_scene(const std::filesystem::path& path) { return with_path(path, parse_scene); }

TrainSettings parse_train_settings(const std::string& text)
{
    TrainSettings s;
    const YAML::Node root = parse_yaml(text);
    if (!root || root.IsNull())
        return s;
    check_keys(root, "train config",
               {"learning_rate", "epochs", "loss", "db_floor", "seed", "batch_size", "optimizer", "mode",
                "checkpoint_every", "sh_decay", "seeding"});
    TrainConfig& c = s.train;
    if (root["learning_rate"])
        c.learning_rate = scalar<double>(root["learning_rate"], "learning_rate");
    if (root["epochs"])
        c.epochs = scalar<int>(root["epochs"], "epochs");
    if (const YAML::Node n = root["loss"]) {
        const auto v = scalar<std::string>(n, "loss");
        if (v == "l2_db")
            c.loss = LossKind::l2_db;
        else if (v == "l1_db")
            c.loss = LossKind::l1_db;
        else
            fail(n, "loss: expected 'l2_db' or 'l1_db'");
    }
    if (root["db_floor"])
        c.db_floor = scalar<double>(root["db_floor"], "db_floor");
    if (root["seed"])
        c.rng_seed = scalar<std::uint64_t>(root["seed"], "seed");
    if (root["batch_size"]) {
        const int b = scalar<int>(root["batch_size"], "batch_size");
        if (b < 1)
            fail(root["batch_size"], "batch_size: must be >= 1");
        c.batch_size = static_cast<std::size_t>(b);
    }
    if (const YAML::Node n = root["optimizer"]) {
        const auto v = scalar<std::string>(n, "optimizer");
        if (v == "adam")
            c.optimizer = OptimizerKind::adam;
        else if (v == "sgd")
            c.optimizer = OptimizerKind::sgd;
        else
            fail(n, "optimizer: expected 'adam' or 'sgd'");
    }
    if (const YAML::Node n = root["mode"]) {
        const auto v = scalar<std::string>(n, "mode");
        if (v == "full_path")
            c.mode = RenderMode::full_path;
        else if (v == "legacy")
            c.mode = RenderMode::legacy;
        else
            fail(n, "mode: expected 'full_path' or 'legacy'");
    }
    if (root["sh_decay"])
        c.sh_decay = scalar<double>(root["sh_decay"], "sh_decay");
    if (root["checkpoint_every"])
        c.checkpoint_every = scalar<int>(root["checkpoint_every"], "checkpoint_every");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        fail(root, e.what());
    }

    if (const YAML::Node sd = root["seeding"]) {
        check_keys(sd, "seeding",
                   {"spacing", "init_density", "init_scale", "normal_scale_ratio", "init_gain", "sh_degree"});
        SeedParams& p = s.seeding;
        if (sd["spacing"])
            p.spacing = scalar<double>(sd["spacing"], "spacing");
        if (sd["init_density"])
            p.init_density = scalar<double>(sd["init_density"], "init_density");
        if (sd["init_scale"])
            p.init_scale = scalar<double>(sd["init_scale"], "init_scale");
        if (sd["normal_scale_ratio"])
            p.normal_scale_ratio = scalar<double>(sd["normal_scale_ratio"], "normal_scale_ratio");
        if (sd["init_gain"])
            p.init_gain = scalar<double>(sd["init_gain"], "init_gain");
        if (sd["sh_degree"])
            p.sh_degree = scalar<int>(sd["sh_degree"], "sh_degree");
    }
    return s;
}

TrainSettings load_train_settings(const std::filesystem::path& path)
{
    return with_path(path, parse_train_settings);
}

} // namespace thzrrf
