#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hourglass/experiments.hpp"
#include "hourglass/mesh.hpp"

namespace hg {

/// Result table with the fixed column order
/// scheme,n,h_mean,tau,Linf_error,interior_max,rate. NaN fields are written
/// as empty cells; doubles round-trip exactly.
void write_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

/// Legacy ASCII VTK unstructured grid with one or more point scalar fields.
/// Quads are written as cell type 9, other polygons as type 7.
void write_vtk(const std::filesystem::path& path, const Mesh& mesh,
               std::span<const std::pair<std::string, Eigen::VectorXd>> point_fields);

/// Writes every kept field snapshot as <dir>/<name>.vtk with "u" and "error"
/// point data.
void write_snapshots(const std::filesystem::path& dir, std::span<const FieldSnapshot> snapshots);

/// Mesh as JSON: {"points": [[x,y],...], "cells": [[...],...],
/// "boundary": [...], "meta": {...}}, zero-based indices.
void write_mesh_json(const std::filesystem::path& path, const Mesh& mesh);
Mesh read_mesh_json(const std::filesystem::path& path);

}  // namespace hg
