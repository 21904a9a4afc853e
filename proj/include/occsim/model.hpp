#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#include "occsim/fear.hpp"
#include "occsim/sight.hpp"

namespace occ {

// Raised for malformed or invalid configuration documents. `where` names
// the file and, when known, the offending key or line.
struct ConfigError : std::runtime_error {
    ConfigError(std::string where_, const std::string& what)
        : std::runtime_error(where_ + ": " + what), where(std::move(where_)) {}
    std::string where;
};

struct Model {
    FearModel fear;
    SightCalibration sight;
    double very_small_gap = 3.0;
};

// Shipped model and rule files, compiled into the library.
namespace embedded {
const std::string& model_json();
const std::string& likelihood_rules();
const std::string& ff_rules();
const std::string& exp1_json();
const std::string& table7_json();
const std::string& table8_json();
}  // namespace embedded

// Built from the embedded files. Constructed once and shared.
std::shared_ptr<const Model> default_model();

// Loads a model document; rule file names resolve relative to its directory.
std::shared_ptr<const Model> load_model(const std::filesystem::path& path);

// Same, from text. Rule files are looked up in `base_dir`, falling back to
// the embedded copies for the shipped names when base_dir is empty.
std::shared_ptr<const Model> parse_model(const std::string& text, const std::filesystem::path& base_dir,
                                         const std::string& where = "<model>");

std::string read_text_file(const std::filesystem::path& path);

// Write to a sibling temporary, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace occ
