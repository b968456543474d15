#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "bornsim/atomphoton.hpp"
#include "bornsim/errors.hpp"
#include "bornsim/io.hpp"
#include "support/oracles.hpp"

using namespace bornsim;

namespace {

std::string parse_error_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError) << e.what();
        return e.what();
    }
    ADD_FAILURE() << "expected a ParseError";
    return {};
}

}  // namespace

TEST(FockFixture, RoundTrip) {
    std::mt19937_64 gen(3);
    const auto space = FockSpace::make(AccessibilityPartition(4, {1, 3}), 3);
    const auto psi = oracle::random_fock_state(space, 10, gen);
    std::stringstream buffer;
    io::write_fock_fixture(buffer, psi);
    const auto back = io::read_fock_fixture(buffer);
    EXPECT_TRUE(back.space() == psi.space());
    ASSERT_EQ(back.terms().size(), psi.terms().size());
    for (const auto& [occ, amp] : psi.terms()) EXPECT_EQ(back.terms().at(occ), amp);
}

TEST(FockFixture, CommentsAndEmptyAccessible) {
    std::istringstream in(
        "# two inaccessible modes\n"
        "single_particle_dim 2\n"
        "\n"
        "accessible\n"
        "term 1 0 : 0.6 0   # first\n"
        "term 0 1 : 0 0.8\n");
    const auto psi = io::read_fock_fixture(in);
    EXPECT_EQ(psi.space().max_total(), 3u);
    EXPECT_TRUE(psi.space().partition().accessible().empty());
    EXPECT_NEAR(psi.squared_norm(), 1.0, 1e-15);
}

TEST(FockFixture, ErrorsCarryLineNumbers) {
    std::istringstream wrong_length("single_particle_dim 2\naccessible 0\nterm 1 : 1 0\n");
    EXPECT_NE(parse_error_message([&] { io::read_fock_fixture(wrong_length); }).find("line 3"), std::string::npos);

    std::istringstream bad_number("single_particle_dim 2\naccessible 0\nterm 1 0 : x 0\n");
    EXPECT_NE(parse_error_message([&] { io::read_fock_fixture(bad_number); }).find("line 3"), std::string::npos);

    std::istringstream too_many("single_particle_dim 1\nmax_total 1\naccessible 0\nterm 2 : 1 0\n");
    EXPECT_NE(parse_error_message([&] { io::read_fock_fixture(too_many); }).find("line 4"), std::string::npos);

    std::istringstream unknown("single_particle_dim 1\nbogus 3\n");
    EXPECT_NE(parse_error_message([&] { io::read_fock_fixture(unknown); }).find("line 2"), std::string::npos);

    std::istringstream missing("accessible 0\n");
    parse_error_message([&] { io::read_fock_fixture(missing); });
}

TEST(ProcessTable, RoundTripBuiltinsAndAtom) {
    std::vector<ScatteringProcess> processes{builtin_process(BuiltinProcess::Uniform),
                                             builtin_process(BuiltinProcess::Maximum),
                                             builtin_process(BuiltinProcess::Born), build_atom_photon(0.8, 0.4).process};
    for (const auto& proc : processes) {
        std::stringstream buffer;
        io::write_process_table(buffer, proc);
        const auto back = io::read_process_table(buffer);
        EXPECT_EQ(back.name(), proc.name());
        EXPECT_EQ(back.label_names(), proc.label_names());
        for (std::size_t r = 0; r < 4; ++r) {
            ASSERT_EQ(back.rows()[r].size(), proc.rows()[r].size());
            for (std::size_t i = 0; i < proc.rows()[r].size(); ++i) {
                EXPECT_EQ(back.rows()[r][i].qubit_out, proc.rows()[r][i].qubit_out);
                EXPECT_EQ(back.rows()[r][i].label, proc.rows()[r][i].label);
                EXPECT_EQ(back.rows()[r][i].amplitude, proc.rows()[r][i].amplitude);
            }
        }
    }
}

TEST(ProcessTable, Errors) {
    std::istringstream missing_row("row 0 : 0 1 1 0\nrow 1 : 0 2 1 0\nrow 2 : 1 3 1 0\n");
    EXPECT_NE(parse_error_message([&] { io::read_process_table(missing_row); }).find("row 3"), std::string::npos);

    std::istringstream bad_entry("row 0 : 0 1 1\n");
    EXPECT_NE(parse_error_message([&] { io::read_process_table(bad_entry); }).find("line 1"), std::string::npos);

    std::istringstream bad_qubit("name x\nrow 0 : 2 1 1 0\n");
    EXPECT_NE(parse_error_message([&] { io::read_process_table(bad_qubit); }).find("line 2"), std::string::npos);

    std::istringstream not_unitary("row 0 : 0 1 1 0\nrow 1 : 0 1 1 0\nrow 2 : 1 3 1 0\nrow 3 : 1 4 1 0\n");
    try {
        io::read_process_table(not_unitary);
        FAIL() << "expected NotUnitary";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotUnitary);
    }
}

TEST(ProjectorSetFile, RoundTrip) {
    std::mt19937_64 gen(4);
    const Matrix u = oracle::random_unitary(2, gen);
    Matrix p = u.col(0) * u.col(0).adjoint();
    const ProjectorSet set(2, {p});
    std::stringstream buffer;
    io::write_projector_set(buffer, set);
    const auto back = io::read_projector_set(buffer);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ((back.projector(0) - p).norm(), 0.0);
}

TEST(ProjectorSetFile, Errors) {
    std::istringstream short_row("dim 2\nprojector\n1 0 0 0\n0 0\n");
    EXPECT_NE(parse_error_message([&] { io::read_projector_set(short_row); }).find("line 4"), std::string::npos);

    std::istringstream truncated("dim 2\nprojector\n1 0 0 0\n");
    EXPECT_NE(parse_error_message([&] { io::read_projector_set(truncated); }).find("line 2"), std::string::npos);

    std::istringstream non_commuting("dim 2\nprojector\n1 0 0 0\n0 0 0 0\nprojector\n0.5 0 0.5 0\n0.5 0 0.5 0\n");
    try {
        io::read_projector_set(non_commuting);
        FAIL() << "expected NotCommuting";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotCommuting);
    }
}

TEST(Files, MissingPathIsParseError) {
    parse_error_message([] { io::read_projector_set(std::filesystem::path("/nonexistent/set.txt")); });
}
