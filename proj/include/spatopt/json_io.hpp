#pragma once

#include "spatopt/evolve.hpp"
#include "spatopt/genotype.hpp"
#include "spatopt/rod.hpp"
#include "spatopt/workspace.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace spatopt::io {

/// Insertion-ordered JSON; field order is part of each file format.
using Json = nlohmann::ordered_json;

/// Two-space indented dump with trailing newline.
std::string dump(const Json& j);
Json parse(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

Json to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j);

Json to_json(const Genotype& g);
Genotype genotype_from_json(const Json& j);

/// Workspace file. Readers reject files whose lattice or ordering differs.
Json to_json(const Workspace& w);
Workspace workspace_from_json(const Json& j);
/// Rows P1,P2,P3,x,y,z in lattice order.
std::string workspace_csv(const Workspace& w);

/// Flat config object mirroring GAConfig field names.
Json to_json(const GAConfig& cfg);
/// Applies the keys present in `j` on top of `base`; unknown keys are rejected.
GAConfig config_from_json(const Json& j, GAConfig base = {});

Json to_json(const Score& s);
Json to_json(const GenerationRecord& rec);

/// Backbone rows s,x,y,z,qw,qx,qy,qz,nx,ny,nz,mx,my,mz.
std::string backbone_csv(const std::vector<RodState>& states);

/// Header generation,min_T,mean_T,max_T,min_L,best_K followed by one row per record.
std::string loss_curve_header();
std::string loss_curve_row(const GenerationRecord& rec);

/// Looks like a genotype file (has "grid" and typed points) rather than a workspace.
bool is_genotype_json(const Json& j);

}  // namespace spatopt::io
