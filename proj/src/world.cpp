#include "lingua/world.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lingua::world {

using nlohmann::json;

double normalize_heading(double degrees) {
    if (!std::isfinite(degrees)) {
        throw std::domain_error("normalize_heading: non-finite angle");
    }
    double r = std::fmod(degrees + 180.0, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r -= 360.0;  // -tiny + 360 rounds up to 360
    return r - 180.0;
}

Pose2D::Pose2D(double x_, double y_, double heading_deg)
    : x(x_), y(y_), heading(normalize_heading(heading_deg)) {}

std::string_view to_string(RobotKind kind) {
    switch (kind) {
        case RobotKind::camera_bot: return "camera_bot";
        case RobotKind::box_bot: return "box_bot";
        case RobotKind::arm_bot: return "arm_bot";
    }
    return "?";
}

std::string_view to_string(GripperState state) {
    return state == GripperState::open ? "open" : "closed";
}

std::string_view to_string(ObjectShape shape) {
    return shape == ObjectShape::box ? "box" : "cylinder";
}

std::optional<RobotKind> robot_kind_from_string(std::string_view s) {
    if (s == "camera_bot") return RobotKind::camera_bot;
    if (s == "box_bot") return RobotKind::box_bot;
    if (s == "arm_bot") return RobotKind::arm_bot;
    return std::nullopt;
}

bool has_camera(RobotKind kind) { return kind == RobotKind::camera_bot; }
bool has_arm(RobotKind kind) { return kind == RobotKind::arm_bot; }
bool has_transport_frame(RobotKind kind) { return kind == RobotKind::box_bot; }

const JointVector* RobotConfig::preset(std::string_view name) const {
    auto it = presets.find(std::string(name));
    return it == presets.end() ? nullptr : &it->second;
}

bool in_region(Vec2 point, const Region& region) {
    return std::abs(point.x - region.center.x) <= region.half_size.x &&
           std::abs(point.y - region.center.y) <= region.half_size.y;
}

const RobotConfig* Scene::find_robot(std::string_view id) const {
    for (const auto& r : robots)
        if (r.id == id) return &r;
    return nullptr;
}

const SceneObject* Scene::find_object(std::string_view id) const {
    for (const auto& o : objects)
        if (o.id == id) return &o;
    return nullptr;
}

const Region* Scene::find_region(std::string_view id) const {
    for (const auto& r : regions)
        if (r.id == id) return &r;
    return nullptr;
}

std::vector<std::string> Scene::robot_ids() const {
    std::vector<std::string> ids;
    ids.reserve(robots.size());
    for (const auto& r : robots) ids.push_back(r.id);
    return ids;
}

SceneError::SceneError(std::string field_path, const std::string& reason)
    : std::runtime_error(field_path.empty() ? reason : field_path + ": " + reason),
      field_path_(std::move(field_path)) {}

namespace {

// Small cursor over the document that carries the field path for error messages.
class Field {
public:
    Field(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& node() const { return node_; }

    bool has(const char* key) const { return node_.is_object() && node_.contains(key); }

    Field at(const char* key) const {
        if (!node_.is_object()) fail("expected an object");
        if (!node_.contains(key)) throw SceneError(join(key), "missing required field");
        return Field(node_.at(key), join(key));
    }

    Field item(std::size_t i) const {
        return Field(node_.at(i), path_ + "[" + std::to_string(i) + "]");
    }

    std::size_t array_size() const {
        if (!node_.is_array()) fail("expected an array");
        return node_.size();
    }

    double number() const {
        if (!node_.is_number()) fail("expected a number");
        double v = node_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }

    std::string string() const {
        if (!node_.is_string()) fail("expected a string");
        return node_.get<std::string>();
    }

    bool boolean() const {
        if (!node_.is_boolean()) fail("expected a boolean");
        return node_.get<bool>();
    }

    [[noreturn]] void fail(const std::string& reason) const { throw SceneError(path_, reason); }

private:
    std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& node_;
    std::string path_;
};

Vec2 read_vec2(const Field& f, const char* kx = "x", const char* ky = "y") {
    if (f.node().is_array()) {
        if (f.array_size() != 2) f.fail("expected [x, y]");
        return {f.item(0).number(), f.item(1).number()};
    }
    return {f.at(kx).number(), f.at(ky).number()};
}

JointVector read_joints(const Field& f) {
    if (f.array_size() != kJointCount) f.fail("expected exactly 5 joint values");
    JointVector v{};
    for (std::size_t i = 0; i < kJointCount; ++i) v[i] = f.item(i).number();
    return v;
}

void check_limits(const Field& f, const JointVector& v, const JointLimits& limits) {
    for (std::size_t i = 0; i < kJointCount; ++i) {
        if (!limits[i].contains(v[i])) {
            f.item(i).fail("joint value outside configured limits");
        }
    }
}

RobotConfig read_robot(const Field& f) {
    RobotConfig rc;
    rc.id = f.at("id").string();
    if (rc.id.empty()) f.at("id").fail("id must be nonempty");

    auto k = robot_kind_from_string(f.at("kind").string());
    if (!k) f.at("kind").fail("unknown robot kind (expected camera_bot, box_bot or arm_bot)");
    rc.kind = *k;

    auto pose = f.at("pose");
    rc.initial_pose = Pose2D(pose.at("x").number(), pose.at("y").number(),
                             pose.at("heading").number());

    auto lim = f.at("joint_limits");
    if (lim.array_size() != kJointCount) lim.fail("expected 5 [min, max] pairs");
    for (std::size_t i = 0; i < kJointCount; ++i) {
        auto pair = lim.item(i);
        if (pair.array_size() != 2) pair.fail("expected [min, max]");
        rc.joint_limits[i] = {pair.item(0).number(), pair.item(1).number()};
        if (rc.joint_limits[i].min > rc.joint_limits[i].max) pair.fail("min exceeds max");
    }

    auto presets = f.at("presets");
    for (const char* name : {"fold", "extend"}) {
        auto p = presets.at(name);
        rc.presets[name] = read_joints(p);
        check_limits(p, rc.presets[name], rc.joint_limits);
    }
    for (auto it = presets.node().begin(); it != presets.node().end(); ++it) {
        if (rc.presets.count(it.key())) continue;
        Field p(it.value(), presets.path() + "." + it.key());
        rc.presets[it.key()] = read_joints(p);
        check_limits(p, rc.presets[it.key()], rc.joint_limits);
    }

    if (f.has("joints")) {
        auto j = f.at("joints");
        rc.initial_joints = read_joints(j);
        check_limits(j, rc.initial_joints, rc.joint_limits);
    } else {
        rc.initial_joints = rc.presets.at("fold");
    }

    auto speed = f.at("speed");
    rc.speed.linear_mps = speed.at("linear_mps").number();
    rc.speed.angular_dps = speed.at("angular_dps").number();
    rc.speed.joint_dps = speed.at("joint_dps").number();
    if (rc.speed.linear_mps <= 0) speed.at("linear_mps").fail("must be positive");
    if (rc.speed.angular_dps <= 0) speed.at("angular_dps").fail("must be positive");
    if (rc.speed.joint_dps <= 0) speed.at("joint_dps").fail("must be positive");

    if (f.has("decel")) {
        auto d = f.at("decel");
        if (d.has("window_m")) rc.decel.window_m = d.at("window_m").number();
        if (d.has("stop_tol_m")) rc.decel.stop_tol_m = d.at("stop_tol_m").number();
        if (d.has("angular_window_deg"))
            rc.decel.angular_window_deg = d.at("angular_window_deg").number();
        if (d.has("angular_stop_tol_deg"))
            rc.decel.angular_stop_tol_deg = d.at("angular_stop_tol_deg").number();
        if (!(rc.decel.stop_tol_m > 0 && rc.decel.window_m > rc.decel.stop_tol_m))
            d.fail("require window_m > stop_tol_m > 0");
        if (!(rc.decel.angular_stop_tol_deg > 0 &&
              rc.decel.angular_window_deg > rc.decel.angular_stop_tol_deg))
            d.fail("require angular_window_deg > angular_stop_tol_deg > 0");
    }

    if (f.has("arm")) {
        auto a = f.at("arm");
        rc.arm.l2 = a.at("l2").number();
        rc.arm.l3 = a.at("l3").number();
        rc.arm.l4 = a.at("l4").number();
        rc.arm.z0 = a.at("z0").number();
        if (rc.arm.l2 < 0 || rc.arm.l3 < 0 || rc.arm.l4 < 0) a.fail("link lengths must be nonnegative");
    }
    return rc;
}

SceneObject read_object(const Field& f) {
    SceneObject o;
    o.id = f.at("id").string();
    if (o.id.empty()) f.at("id").fail("id must be nonempty");
    auto shape = f.at("shape").string();
    if (shape == "box") {
        o.shape = ObjectShape::box;
    } else if (shape == "cylinder") {
        o.shape = ObjectShape::cylinder;
    } else {
        f.at("shape").fail("unknown shape (expected box or cylinder)");
    }
    o.position = read_vec2(f.at("position"));
    o.extent = f.at("extent").number();
    if (o.extent <= 0) f.at("extent").fail("must be positive");
    o.movable = f.at("movable").boolean();
    return o;
}

Region read_region(const Field& f) {
    Region r;
    r.id = f.at("id").string();
    if (r.id.empty()) f.at("id").fail("id must be nonempty");
    r.center = read_vec2(f.at("center"));
    r.half_size = read_vec2(f.at("half_size"), "hx", "hy");
    if (r.half_size.x <= 0) f.at("half_size").fail("hx must be positive");
    if (r.half_size.y <= 0) f.at("half_size").fail("hy must be positive");
    return r;
}

json joints_json(const JointVector& v) { return json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

Scene scene_from_json(const json& doc) {
    Field root(doc, "");
    if (!doc.is_object()) root.fail("scene document must be a JSON object");

    Scene s;
    s.name = root.at("name").string();
    s.tick_seconds = root.at("tick_seconds").number();
    if (s.tick_seconds <= 0) root.at("tick_seconds").fail("must be positive");

    std::set<std::string> ids;
    auto claim = [&](const std::string& id, const Field& where) {
        if (!ids.insert(id).second) where.fail("duplicate id '" + id + "'");
    };

    auto robots = root.at("robots");
    for (std::size_t i = 0; i < robots.array_size(); ++i) {
        auto f = robots.item(i);
        s.robots.push_back(read_robot(f));
        claim(s.robots.back().id, f.at("id"));
    }
    if (s.robots.empty()) robots.fail("at least one robot is required");

    auto objects = root.at("objects");
    for (std::size_t i = 0; i < objects.array_size(); ++i) {
        auto f = objects.item(i);
        s.objects.push_back(read_object(f));
        claim(s.objects.back().id, f.at("id"));
    }

    auto regions = root.at("regions");
    for (std::size_t i = 0; i < regions.array_size(); ++i) {
        auto f = regions.item(i);
        s.regions.push_back(read_region(f));
        claim(s.regions.back().id, f.at("id"));
    }
    return s;
}

Scene load_scene(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SceneError("", std::string("malformed JSON: ") + e.what());
    }
    return scene_from_json(doc);
}

Scene load_scene_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SceneError("", "cannot open scene file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scene(buf.str());
}

json scene_to_json(const Scene& scene) {
    json robots = json::array();
    for (const auto& r : scene.robots) {
        json limits = json::array();
        for (const auto& l : r.joint_limits) limits.push_back({l.min, l.max});
        json presets = json::object();
        for (const auto& [name, v] : r.presets) presets[name] = joints_json(v);
        robots.push_back({
            {"id", r.id},
            {"kind", to_string(r.kind)},
            {"pose", {{"x", r.initial_pose.x}, {"y", r.initial_pose.y}, {"heading", r.initial_pose.heading}}},
            {"joint_limits", limits},
            {"presets", presets},
            {"joints", joints_json(r.initial_joints)},
            {"speed", {{"linear_mps", r.speed.linear_mps},
                       {"angular_dps", r.speed.angular_dps},
                       {"joint_dps", r.speed.joint_dps}}},
            {"decel", {{"window_m", r.decel.window_m},
                       {"stop_tol_m", r.decel.stop_tol_m},
                       {"angular_window_deg", r.decel.angular_window_deg},
                       {"angular_stop_tol_deg", r.decel.angular_stop_tol_deg}}},
            {"arm", {{"l2", r.arm.l2}, {"l3", r.arm.l3}, {"l4", r.arm.l4}, {"z0", r.arm.z0}}},
        });
    }
    json objects = json::array();
    for (const auto& o : scene.objects) {
        objects.push_back({{"id", o.id},
                           {"shape", to_string(o.shape)},
                           {"position", {{"x", o.position.x}, {"y", o.position.y}}},
                           {"extent", o.extent},
                           {"movable", o.movable}});
    }
    json regions = json::array();
    for (const auto& r : scene.regions) {
        regions.push_back({{"id", r.id},
                           {"center", {{"x", r.center.x}, {"y", r.center.y}}},
                           {"half_size", {{"hx", r.half_size.x}, {"hy", r.half_size.y}}}});
    }
    return {{"name", scene.name},
            {"tick_seconds", scene.tick_seconds},
            {"robots", robots},
            {"objects", objects},
            {"regions", regions}};
}

std::string serialize_scene(const Scene& scene) { return scene_to_json(scene).dump(2); }

RobotState initial_state(const RobotConfig& config) {
    RobotState st;
    st.id = config.id;
    st.kind = config.kind;
    st.pose = config.initial_pose;
    st.joints = config.initial_joints;
    st.trajectory.push_back({0, st.pose});
    return st;
}

}  // namespace lingua::world
