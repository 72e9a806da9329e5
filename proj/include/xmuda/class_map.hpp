#ifndef XMUDA_CLASS_MAP_HPP
#define XMUDA_CLASS_MAP_HPP

#include <map>
#include <string>
#include <vector>

namespace xmuda::data {

// Total mapping from source-dataset class names onto a shared class list.
// "ignore" sends a source class to the reserved ignore id (= class count).
class ClassMap {
public:
    ClassMap(std::vector<std::string> source_classes,
             std::vector<std::string> target_classes,
             std::map<std::string, std::string> entries);

    // Parse the versioned plain-text table format written by save().
    static ClassMap load(const std::string& path);
    void save(const std::string& path) const;

    const std::vector<std::string>& source_classes() const { return source_; }
    const std::vector<std::string>& target_classes() const { return target_; }
    int ignore_id() const { return int(target_.size()); }

    // Target id (or ignore id) for a source class name/id.
    int map_name(const std::string& source_class) const;
    int map_id(int source_id) const { return mapped_ids_[size_t(source_id)]; }

    std::vector<int> map_labels(const std::vector<int>& source_labels) const;

private:
    std::vector<std::string> source_;
    std::vector<std::string> target_;
    std::map<std::string, std::string> entries_;
    std::vector<int> mapped_ids_;  // source id -> target id / ignore
};

// The shipped tables (also written as plain-text files by generate-data).
ClassMap a2d2_to_common_map();
ClassMap semantickitti_to_common_map();
ClassMap nuscenes_to_5cat_map();

// Built-in class lists.
const std::vector<std::string>& five_category_classes();  // vehicle..background
const std::vector<std::string>& ten_class_list();         // car..other-objects

}  // namespace xmuda::data

#endif
