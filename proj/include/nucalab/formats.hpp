#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nucalab/configuration.hpp"
#include "nucalab/engine.hpp"
#include "nucalab/linear.hpp"
#include "nucalab/quasitiling.hpp"
#include "nucalab/sft.hpp"

namespace nucalab {

// Text grammars for the shipped file formats (see README for the full
// grammar). All parsers throw ParseError with line/column; all writers emit
// the canonical form, and parse(write(x)) reproduces x.

struct RuleFile {
    RuleAssignment assignment;
    std::vector<std::pair<std::string, RuleTable>> tables;   // named, in file order
    std::vector<std::pair<std::string, LatticeSet>> regions;  // table name per region
    std::string default_name;
};

RuleFile parse_rule_file(std::string_view text);
std::string write_rule_file(const RuleFile& f);

struct LinearRuleFile {
    LinearAssignment assignment;
    std::vector<std::pair<std::string, LinearRule>> rules;
    std::vector<std::pair<std::string, LatticeSet>> regions;
    std::string default_name;
};

LinearRuleFile parse_linear_rule_file(std::string_view text);
std::string write_linear_rule_file(const LinearRuleFile& f);

struct SftFile {
    Sft sft;
    bool listed_forbidden = true;  // whether the file lists forbidden or allowed patterns
    std::vector<Pattern> listed;
};

SftFile parse_sft_file(std::string_view text);
std::string write_sft_file(const SftFile& f);

QuasiTiling parse_tiling_file(std::string_view text);
std::string write_tiling_file(const QuasiTiling& t);

// "const SYM [; set CELL=SYM ...]" or "periodic LAT : PATTERN [; set ...]".
Configuration parse_config_text(std::string_view text, int dim, int alphabet);

// Symbol string in canonical cell order; d=2 rows may be separated by '/'.
Pattern parse_pattern_text(std::string_view text, const FiniteSet& support, int alphabet);

// "lo..hi" (d=1) or "xlo..xhi,ylo..yhi" (d=2).
FiniteSet parse_box_text(std::string_view text, int dim);

std::string read_text_file(const std::string& path);
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace nucalab
