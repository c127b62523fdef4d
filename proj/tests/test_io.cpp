#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tpreg/fit.hpp"
#include "tpreg/io.hpp"
#include "tpreg/simstudy.hpp"

using namespace tpreg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tpreg_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("csv read/write roundtrip with NA cells") {
  TempDir tmp;
  const fs::path p = tmp.path / "t.csv";
  std::ofstream(p) << "a,b,c\n1,2,NA\n4,,6\n";
  const CsvTable t = CsvTable::read(p);
  CHECK(t.header == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][2] == "NA");
  CHECK(t.rows[1][1] == "");
  t.write(tmp.path / "t2.csv");
  const CsvTable t2 = CsvTable::read(tmp.path / "t2.csv");
  CHECK(t2.rows == t.rows);
}

TEST_CASE("load_dataset: status conventions agree after mapping") {
  TempDir tmp;
  const fs::path a = tmp.path / "a.csv";
  std::ofstream(a) << "time,status,x\n10,1,0.5\n20,0,1.5\n30,1,-1\n40,1,0.1\n";
  const fs::path b = tmp.path / "b.csv";
  std::ofstream(b) << "time,status,x\n10,2,0.5\n20,1,1.5\n30,2,-1\n40,2,0.1\n";

  DataConfig ca;
  ca.covariate_columns = {"x"};
  ca.status_convention = StatusConvention::Event1Censor0;
  DataConfig cb = ca;
  cb.status_convention = StatusConvention::Event2Censor1;

  const Dataset da = load_dataset(a, ca);
  const Dataset db = load_dataset(b, cb);
  CHECK(da.design == db.design);
  REQUIRE(da.obs.size() == db.obs.size());
  for (std::size_t i = 0; i < da.obs.size(); ++i) {
    CHECK(da.obs[i].kind == db.obs[i].kind);
    CHECK(da.obs[i].value() == db.obs[i].value());
  }
  // times are logged for the AFT scale
  CHECK(da.obs[0].value() == doctest::Approx(std::log(10.0)));
  CHECK(da.obs[1].kind == CensoredObservation::Kind::Right);
}

TEST_CASE("load_dataset: complete-case filter and error paths") {
  TempDir tmp;
  const fs::path p = tmp.path / "m.csv";
  std::ofstream(p) << "time,status,x\n10,1,0.5\n20,1,NA\n30,0,2.0\n5,1,1.0\n";
  DataConfig c;
  c.covariate_columns = {"x"};
  const Dataset d = load_dataset(p, c);
  CHECK(d.n() == 3);  // NA row dropped

  DataConfig missing = c;
  missing.covariate_columns = {"nope"};
  CHECK_THROWS_WITH_AS(load_dataset(p, missing), doctest::Contains("nope"),
                       std::runtime_error);

  const fs::path bad = tmp.path / "bad.csv";
  std::ofstream(bad) << "time,status,x\n-3,1,0.5\n";
  CHECK_THROWS_AS(load_dataset(bad, c), std::runtime_error);  // non-positive time

  const fs::path badstat = tmp.path / "bs.csv";
  std::ofstream(badstat) << "time,status,x\n3,7,0.5\n";
  CHECK_THROWS_AS(load_dataset(badstat, c), std::runtime_error);
}

TEST_CASE("chain persistence roundtrip") {
  TempDir tmp;
  Scenario sc = Scenario::one(0.3, 40);
  const Dataset data = generate(sc, 1);
  ModelSpec spec;
  spec.baseline = BaselineKind::logistic();
  PosteriorFitConfig cfg;
  cfg.n_keep = 25;
  cfg.burn_in = 500;
  cfg.thin = 2;
  cfg.seed = 5;
  const Chain chain = fit_posterior(data, spec, cfg);

  const fs::path p = tmp.path / "chain.csv";
  save_chain_csv(chain, p);
  const Chain back = load_chain_csv(p);
  CHECK(back.parameter_names == chain.parameter_names);
  REQUIRE(back.size() == chain.size());
  for (Eigen::Index m = 0; m < chain.size(); ++m) {
    for (Eigen::Index j = 0; j < chain.dim(); ++j)
      CHECK(back.draws(m, j) == chain.draws(m, j));  // 17 digits: exact
    CHECK(back.logpost[m] == chain.logpost[m]);
  }

  save_chain_sidecar(chain, spec, tmp.path / "meta.json");
  std::ifstream meta(tmp.path / "meta.json");
  std::string body((std::istreambuf_iterator<char>(meta)),
                   std::istreambuf_iterator<char>());
  CHECK(body.find("tp-logistic") != std::string::npos);
  CHECK(body.find("acceptance_rate") != std::string::npos);
}

TEST_CASE("bundled NCCTG fixture loads with the documented shape") {
  DataConfig c;
  c.covariate_columns = {"age", "sex", "ph.ecog"};
  c.status_convention = StatusConvention::Event2Censor1;
  const Dataset d = load_dataset(fs::path(TPREG_TEST_DATA_DIR) / "ncctg_lung.csv", c);
  CHECK(d.n() == 227);
  CHECK(d.p() == 4);
  CHECK(d.count(CensoredObservation::Kind::Right) == 63);
  CHECK(d.count(CensoredObservation::Kind::Exact) == 164);
  d.validate();
}
