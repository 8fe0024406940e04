#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvrptw/model.hpp"

namespace fvrptw {

inline constexpr const char* kInstanceFormatTag = "FVRPTW";
inline constexpr int kInstanceFormatVersion = 1;
inline constexpr const char* kPlanFormatTag = "FVRPTW-PLAN";

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads an instance document (see docs/formats.md). Throws ParseError
// naming the offending line, or std::runtime_error if the file cannot
// be opened.
Instance load_instance(const std::filesystem::path& path);
Instance parse_instance(std::istream& in, const std::string& source = "<input>");

// Writes the explicit-matrix form; parse_instance(write_instance(x)) == x.
void write_instance(std::ostream& out, const Instance& instance);

// Route id lists from either a plan document or a JSON solve report.
std::vector<std::vector<NodeId>> load_plan(const std::filesystem::path& path);
std::vector<std::vector<NodeId>> parse_plan(std::istream& in, const std::string& source = "<input>");

}  // namespace fvrptw
