#pragma once

#include "perceptsim/study.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(PERCEPTSIM_DATA_DIR) + "/" + name; }

inline std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline perceptsim::StudySpec veras() { return perceptsim::parse_study_spec(read(data_path("veras_sus.json"))); }

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() / ("perceptsim-" + tag + "-" + std::to_string(gen()));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace fixtures
