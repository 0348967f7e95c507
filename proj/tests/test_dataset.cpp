#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace fsck;
using fsck::testing::TempDir;
using fsck::testing::write_text;

namespace {

bool member(const std::vector<double>& set, double v) { return std::find(set.begin(), set.end(), v) != set.end(); }

ErrorKind read_kind(const std::string& path, const QuadratureSet* quad = nullptr) {
    return fsck::testing::kind_of([&] { read_corpus(path, quad); });
}

std::string read_error(const std::string& path) {
    try {
        read_corpus(path);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(Sampling, ValueSetsHaveTheListedSizes) {
    EXPECT_EQ(table1::temperatures().size(), 28u);
    EXPECT_EQ(table1::co2_h2o_fractions().size(), 18u);
    EXPECT_EQ(table1::co_fractions().size(), 9u);
    EXPECT_EQ(table1::co_fractions().back(), 0.5);
}

TEST(Sampling, EveryValueComesFromItsSet) {
    const auto ts = table1::temperatures();
    const auto xs = table1::co2_h2o_fractions();
    const auto xc = table1::co_fractions();
    const auto s = sample_states(5000, 3);
    ASSERT_EQ(s.size(), 5000u);
    std::set<double> seen_t;
    for (const auto& v : s) {
        ASSERT_TRUE(member(ts, v.state.temperature));
        ASSERT_TRUE(member(ts, v.t0));
        ASSERT_TRUE(member(xs, v.state.x_co2));
        ASSERT_TRUE(member(xs, v.state.x_h2o));
        ASSERT_TRUE(member(xc, v.state.x_co));
        ASSERT_LE(v.state.total_absorber(), 1.0);
        ASSERT_GT(v.state.total_absorber(), 0.0);
        seen_t.insert(v.state.temperature);
    }
    EXPECT_EQ(seen_t.size(), ts.size());
}

TEST(Sampling, SeededAndDeterministic) {
    EXPECT_EQ(sample_states(200, 9), sample_states(200, 9));
    EXPECT_NE(sample_states(200, 9), sample_states(200, 10));
    // a longer draw extends a shorter one
    const auto a = sample_states(50, 9), b = sample_states(200, 9);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
}

TEST(Labeling, RowCountOrderAndMonotoneK) {
    const auto states = sample_states(6, 4);
    const auto quad = gauss_chebyshev(8);
    const auto rows = label_states(states, quad, fsck::testing::shared_cache(), 1);
    ASSERT_EQ(rows.size(), 48u);
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            const auto& r = rows[i * 8 + j];
            EXPECT_EQ(r.t, states[i].state.temperature);
            EXPECT_EQ(r.t0, states[i].t0);
            EXPECT_EQ(r.g, quad.nodes[j]);
            EXPECT_GT(r.ka, 0.0);
            if (j) {
                EXPECT_GE(r.k, rows[i * 8 + j - 1].k);
            }
        }
    EXPECT_EQ(label_states(states, quad, fsck::testing::shared_cache(), 4), rows);
}

TEST(Labeling, FailureEchoesTheState) {
    std::vector<StateSample> bad{{ThermoState{3500.0, 0.1, 0.1, 0.0}, 1000.0}};
    try {
        label_states(bad, gauss_chebyshev(8), fsck::testing::shared_cache(), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::range);
        EXPECT_NE(std::string(e.what()).find("T=3500"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("T0=1000"), std::string::npos) << e.what();
    }
}

TEST(Corpus, RoundTripIsExact) {
    TempDir d("corpus");
    const auto quad = gauss_chebyshev(8);
    const auto rows = label_states(sample_states(5, 12), quad, fsck::testing::shared_cache());
    write_corpus(rows, d.file("c.csv"));
    EXPECT_EQ(read_corpus(d.file("c.csv"), &quad), rows);
    std::ifstream in(d.file("c.csv"));
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "T,T0,xco2,xh2o,xco,g,k,ka");
}

TEST(Corpus, RejectsBadFiles) {
    TempDir d("corpus");
    const std::string h = "T,T0,xco2,xh2o,xco,g,k,ka\n";
    write_text(d.file("empty.csv"), "");
    EXPECT_EQ(read_kind(d.file("empty.csv")), ErrorKind::format);
    EXPECT_NE(read_error(d.file("empty.csv")).find("empty corpus"), std::string::npos);
    write_text(d.file("header.csv"), h);
    EXPECT_EQ(read_kind(d.file("header.csv")), ErrorKind::validation);
    write_text(d.file("wrong.csv"), "T,T0,x,g,k,ka\n1000,1000,0.1,0.5,1,1\n");
    EXPECT_EQ(read_kind(d.file("wrong.csv")), ErrorKind::format);
    write_text(d.file("cols.csv"), h + "1000,1000,0.1,0.1,0,0.5,1\n");
    EXPECT_EQ(read_kind(d.file("cols.csv")), ErrorKind::parse);
    write_text(d.file("nan.csv"), h + "1000,1000,0.1,0.1,0,0.5,1,1\n1000,1000,0.1,0.1,0,0.5,nan,1\n");
    EXPECT_EQ(read_kind(d.file("nan.csv")), ErrorKind::parse);
    EXPECT_NE(read_error(d.file("nan.csv")).find(":3:"), std::string::npos);
    write_text(d.file("neg.csv"), h + "1000,1000,0.1,0.1,0,0.5,-1,1\n");
    EXPECT_EQ(read_kind(d.file("neg.csv")), ErrorKind::validation);
    write_text(d.file("hot.csv"), h + "3200,1000,0.1,0.1,0,0.5,1,1\n");
    EXPECT_EQ(read_kind(d.file("hot.csv")), ErrorKind::validation);
    write_text(d.file("g.csv"), h + "1000,1000,0.1,0.1,0,1.0,1,1\n");
    EXPECT_EQ(read_kind(d.file("g.csv")), ErrorKind::validation);
    const auto quad = gauss_chebyshev(8);
    write_text(d.file("node.csv"), h + "1000,1000,0.1,0.1,0,0.5,1,1\n");
    EXPECT_EQ(read_kind(d.file("node.csv"), &quad), ErrorKind::validation);
    EXPECT_EQ(read_kind(d.file("missing.csv")), ErrorKind::io);
}

TEST(Corpus, BatchEncodingAndManifest) {
    const std::vector<TrainingRow> rows{{1000, 800, 0.1, 0.2, 0.01, 0.5, 1e-2, 2e-3},
                                        {1500, 800, 0.0, 0.2, 0.0, 0.25, 1.0, 1e-40}};
    const auto m = make_sfm({4});
    const auto b = to_batch(m, rows);
    ASSERT_EQ(b.rows, 2u);
    EXPECT_EQ(b.x, (std::vector<double>{1000, 800, 0.1, 0.2, 0.01, 0.5, 1500, 800, 0.0, 0.2, 0.0, 0.25}));
    EXPECT_DOUBLE_EQ(b.y[0], -2.0);
    EXPECT_DOUBLE_EQ(b.y[2], 0.0);
    EXPECT_DOUBLE_EQ(b.y[3], -30.0); // floored

    TempDir d("corpus");
    write_manifest(d.file("m.txt"), 42, 2000, gauss_chebyshev(8), SpectralGrid{}, 1);
    std::ifstream in(d.file("m.txt"));
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_NE(ss.str().find("seed = 42\n"), std::string::npos);
    EXPECT_NE(ss.str().find("states = 2000\n"), std::string::npos);
    EXPECT_NE(ss.str().find("nodes = 8\n"), std::string::npos);
}
