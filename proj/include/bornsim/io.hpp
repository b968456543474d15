#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "bornsim/cascade.hpp"
#include "bornsim/fock.hpp"
#include "bornsim/scattering.hpp"

// Plain-text fixture formats. All three share the same lexical rules: one
// directive per line, '#' starts a comment, blank lines are ignored, numbers
// are whitespace separated. Errors are ParseError with the line number.
//
// Fock state fixture:
//   single_particle_dim <d>
//   max_total <m>                       optional, default 3
//   accessible <i> <j> ...              may be empty
//   term <n_0> ... <n_{d-1}> : <re> <im>
//
// Scattering process table (rows 0..3 = (p0,q0) (p0,q1) (p1,q0) (p1,q1)):
//   name <identifier>
//   label <int> <text>                  optional display name
//   row <r> : <qubit_out> <label> <re> <im> [; <qubit_out> <label> <re> <im> ...]
//
// Projector set:
//   dim <d>
//   projector                           then d lines of 2d reals: re im re im ...
//   (repeat 'projector' blocks)

namespace bornsim::io {

FockStateVector read_fock_fixture(std::istream& in);
FockStateVector read_fock_fixture(const std::filesystem::path& path);
void write_fock_fixture(std::ostream& out, const FockStateVector& psi);

ScatteringProcess read_process_table(std::istream& in);
ScatteringProcess read_process_table(const std::filesystem::path& path);
void write_process_table(std::ostream& out, const ScatteringProcess& process);

/// Parses and then runs validate(), so NotIdempotent / NotCommuting surface
/// at load time.
ProjectorSet read_projector_set(std::istream& in);
ProjectorSet read_projector_set(const std::filesystem::path& path);
void write_projector_set(std::ostream& out, const ProjectorSet& set);

}  // namespace bornsim::io
