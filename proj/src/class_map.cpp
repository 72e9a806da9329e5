#include "xmuda/class_map.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "xmuda/errors.hpp"

namespace xmuda::data {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

ClassMap::ClassMap(std::vector<std::string> source_classes,
                   std::vector<std::string> target_classes,
                   std::map<std::string, std::string> entries)
    : source_(std::move(source_classes)),
      target_(std::move(target_classes)),
      entries_(std::move(entries)) {
    require(entries_.size() == source_.size(), ErrorKind::data,
            "class map: mapping must cover every source class exactly once");
    mapped_ids_.reserve(source_.size());
    for (const auto& src : source_) {
        auto it = entries_.find(src);
        require(it != entries_.end(), ErrorKind::data,
                "class map: missing entry for source class '" + src + "'");
        if (it->second == "ignore") {
            mapped_ids_.push_back(ignore_id());
            continue;
        }
        auto tgt = std::find(target_.begin(), target_.end(), it->second);
        require(tgt != target_.end(), ErrorKind::data,
                "class map: unknown target class '" + it->second + "'");
        mapped_ids_.push_back(int(tgt - target_.begin()));
    }
}

int ClassMap::map_name(const std::string& source_class) const {
    auto src = std::find(source_.begin(), source_.end(), source_class);
    require_arg(src != source_.end(),
                "class map: unknown source class '" + source_class + "'");
    return mapped_ids_[size_t(src - source_.begin())];
}

std::vector<int> ClassMap::map_labels(const std::vector<int>& labels) const {
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) {
        require_arg(l >= 0 && l < int(source_.size()),
                    "class map: source label id " + std::to_string(l) +
                        " has no entry");
        out.push_back(mapped_ids_[size_t(l)]);
    }
    return out;
}

void ClassMap::save(const std::string& path) const {
    std::ofstream f(path);
    require(f.good(), ErrorKind::data, "class map: cannot write " + path);
    f << "# class-map v1\n";
    f << "targets:";
    for (size_t i = 0; i < target_.size(); ++i)
        f << (i ? ", " : " ") << target_[i];
    f << "\n";
    for (const auto& src : source_) f << src << " -> " << entries_.at(src) << "\n";
}

ClassMap ClassMap::load(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), ErrorKind::data, "class map: cannot read " + path);
    std::string line;
    std::getline(f, line);
    require(trim(line) == "# class-map v1", ErrorKind::data,
            "class map: unsupported version header in " + path);

    std::vector<std::string> targets;
    std::getline(f, line);
    line = trim(line);
    require(line.rfind("targets:", 0) == 0, ErrorKind::data,
            "class map: missing targets line in " + path);
    std::stringstream ts(line.substr(8));
    std::string tok;
    while (std::getline(ts, tok, ',')) targets.push_back(trim(tok));

    std::vector<std::string> sources;
    std::map<std::string, std::string> entries;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto arrow = line.find("->");
        require(arrow != std::string::npos, ErrorKind::data,
                "class map: malformed line '" + line + "'");
        const std::string src = trim(line.substr(0, arrow));
        const std::string tgt = trim(line.substr(arrow + 2));
        sources.push_back(src);
        entries[src] = tgt;
    }
    return ClassMap(std::move(sources), std::move(targets), std::move(entries));
}

const std::vector<std::string>& five_category_classes() {
    static const std::vector<std::string> k = {"vehicle", "pedestrian", "bike",
                                               "traffic boundary", "background"};
    return k;
}

const std::vector<std::string>& ten_class_list() {
    static const std::vector<std::string> k = {
        "car",      "truck",    "bike",   "person", "road",
        "parking",  "sidewalk", "building", "nature", "other-objects"};
    return k;
}

ClassMap a2d2_to_common_map() {
    static const std::vector<std::pair<std::string, std::string>> rows = {
        {"Car 1", "car"},
        {"Car 2", "car"},
        {"Car 3", "car"},
        {"Car 4", "car"},
        {"Bicycle 1", "bike"},
        {"Bicycle 2", "bike"},
        {"Bicycle 3", "bike"},
        {"Bicycle 4", "bike"},
        {"Pedestrian 1", "person"},
        {"Pedestrian 2", "person"},
        {"Pedestrian 3", "person"},
        {"Truck 1", "truck"},
        {"Truck 2", "truck"},
        {"Truck 3", "truck"},
        {"Small vehicles 1", "bike"},
        {"Small vehicles 2", "bike"},
        {"Small vehicles 3", "bike"},
        {"Traffic signal 1", "other-objects"},
        {"Traffic signal 2", "other-objects"},
        {"Traffic signal 3", "other-objects"},
        {"Traffic sign 1", "other-objects"},
        {"Traffic sign 2", "other-objects"},
        {"Traffic sign 3", "other-objects"},
        {"Utility vehicle 1", "ignore"},
        {"Utility vehicle 2", "ignore"},
        {"Sidebars", "other-objects"},
        {"Speed bumper", "other-objects"},
        {"Curbstone", "sidewalk"},
        {"Solid line", "road"},
        {"Irrelevant signs", "other-objects"},
        {"Road blocks", "other-objects"},
        {"Tractor", "ignore"},
        {"Non-drivable street", "ignore"},
        {"Zebra crossing", "road"},
        {"Obstacles / trash", "other-objects"},
        {"Poles", "other-objects"},
        {"RD restricted area", "road"},
        {"Animals", "other-objects"},
        {"Grid structure", "other-objects"},
        {"Signal corpus", "other-objects"},
        {"Drivable cobbleston", "road"},
        {"Electronic traffic", "other-objects"},
        {"Slow drive area", "road"},
        {"Nature object", "nature"},
        {"Parking area", "parking"},
        {"Sidewalk", "sidewalk"},
        {"Ego car", "car"},
        {"Painted driv. instr.", "road"},
        {"Traffic guide obj.", "other-objects"},
        {"Dashed line", "road"},
        {"RD normal street", "road"},
        {"Sky", "ignore"},
        {"Buildings", "building"},
        {"Blurred area", "ignore"},
        {"Rain dirt", "ignore"},
    };
    std::vector<std::string> sources;
    std::map<std::string, std::string> entries;
    for (const auto& [s, t] : rows) {
        sources.push_back(s);
        entries[s] = t;
    }
    return ClassMap(std::move(sources), ten_class_list(), std::move(entries));
}

ClassMap semantickitti_to_common_map() {
    static const std::vector<std::pair<std::string, std::string>> rows = {
        {"unlabeled", "ignore"},
        {"outlier", "ignore"},
        {"car", "car"},
        {"bicycle", "bike"},
        {"bus", "ignore"},
        {"motorcycle", "bike"},
        {"on-rails", "ignore"},
        {"truck", "truck"},
        {"other-vehicle", "ignore"},
        {"person", "person"},
        {"bicyclist", "bike"},
        {"motorcyclist", "bike"},
        {"road", "road"},
        {"parking", "parking"},
        {"sidewalk", "sidewalk"},
        {"other-ground", "ignore"},
        {"building", "building"},
        {"fence", "other-objects"},
        {"other-structure", "ignore"},
        {"lane-marking", "road"},
        {"vegetation", "nature"},
        {"trunk", "nature"},
        {"terrain", "nature"},
        {"pole", "other-objects"},
        {"traffic-sign", "other-objects"},
        {"other-object", "other-objects"},
        {"moving-car", "car"},
        {"moving-bicyclist", "bike"},
        {"moving-person", "person"},
        {"moving-motorcyclist", "bike"},
        {"moving-on-rails", "ignore"},
        {"moving-bus", "ignore"},
        {"moving-truck", "truck"},
        {"moving-other-vehicle", "ignore"},
    };
    std::vector<std::string> sources;
    std::map<std::string, std::string> entries;
    for (const auto& [s, t] : rows) {
        sources.push_back(s);
        entries[s] = t;
    }
    return ClassMap(std::move(sources), ten_class_list(), std::move(entries));
}

ClassMap nuscenes_to_5cat_map() {
    static const std::vector<std::pair<std::string, std::string>> rows = {
        {"car", "vehicle"},
        {"truck", "vehicle"},
        {"bus", "vehicle"},
        {"trailer", "vehicle"},
        {"construction vehicle", "vehicle"},
        {"pedestrian", "pedestrian"},
        {"motorcycle", "bike"},
        {"bicycle", "bike"},
        {"traffic cone", "traffic boundary"},
        {"barrier", "traffic boundary"},
        {"background", "background"},
    };
    std::vector<std::string> sources;
    std::map<std::string, std::string> entries;
    for (const auto& [s, t] : rows) {
        sources.push_back(s);
        entries[s] = t;
    }
    return ClassMap(std::move(sources), five_category_classes(),
                    std::move(entries));
}

}  // namespace xmuda::data
