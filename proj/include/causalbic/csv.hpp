#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "causalbic/model.hpp"

namespace causalbic {

/// Dataset CSV: header `target,x1,...,xp`; target empty (observational) or
/// semicolon-separated 1-based labels. Errors raise InputError naming the line.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Writes with 17 significant digits, so reading back reproduces every value.
void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Family of targets appearing in the data (the empty target included iff
/// observational rows exist).
TargetFamily family_from_dataset(const Dataset& data);

std::string format_double(double value);

}  // namespace causalbic
