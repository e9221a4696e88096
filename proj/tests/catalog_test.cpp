#include <gtest/gtest.h>

#include "belltasks/catalog.hpp"

using namespace belltasks;

TEST(Catalog, NormalizesNames) {
  EXPECT_EQ(normalize_name("Square Curly"), "square-curly");
  EXPECT_EQ(normalize_name("square_curly"), "square-curly");
  EXPECT_EQ(normalize_name("  5-line  curly "), "5-line-curly");
}

TEST(Catalog, LooksUpNamesAndAliases) {
  EXPECT_EQ(catalog_lookup("tetrahedron").graph, make_complete(4));
  EXPECT_EQ(catalog_lookup("Tetraedron").graph, make_complete(4));
  EXPECT_EQ(catalog_lookup("cube").graph, make_hypercube(3));
  EXPECT_EQ(catalog_lookup("square-curly").graph, with_all_loops(make_cycle(4), "x"));
  EXPECT_EQ(catalog_lookup("ennagon").graph, make_cycle(9));
  EXPECT_EQ(catalog_lookup("nonagon").graph, make_cycle(9));
  EXPECT_EQ(catalog_lookup("13-gon").graph, make_cycle(13));
  EXPECT_EQ(catalog_lookup("7-line curly").graph, make_path(7, true));
  EXPECT_EQ(catalog_lookup("4-line").graph, make_path(4, false));
}

TEST(Catalog, ListsFourteenFigureEntries) {
  EXPECT_EQ(catalog_entries().size(), 14u);
  int figure = 0;
  for (const auto& e : catalog_entries()) figure += e.provenance == Provenance::figure_derived;
  EXPECT_EQ(figure, 12);
}

TEST(Catalog, UnknownNameListsAlternatives) {
  try {
    catalog_lookup("dodecahedron");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_found);
    EXPECT_NE(std::string(e.what()).find("clamp"), std::string::npos);
  }
}

TEST(Catalog, PrintedValueRules) {
  EXPECT_EQ(PrintedValue{"5/9"}.tolerance(), 0.0);
  EXPECT_EQ(PrintedValue{"4.6"}.tolerance(), 0.0);
  EXPECT_TRUE(PrintedValue{"4.6"}.matches(Rational(23, 5)));
  EXPECT_FALSE(PrintedValue{"4.6"}.matches(Rational(46001, 10000)));
  EXPECT_TRUE(PrintedValue{"0.20667"}.matches(Rational(31, 150)));
  EXPECT_TRUE(PrintedValue{"5.01482"}.matches(Rational(677, 135)));
  EXPECT_FALSE(PrintedValue{"0.20667"}.matches(Rational(2068, 10000)));
  EXPECT_TRUE(PrintedValue{"0.64506"}.matches(0.645061, 1e-4));
}

TEST(Catalog, ReferenceTablesHaveEveryRow) {
  EXPECT_EQ(reference_table(1).size(), 20u);
  EXPECT_EQ(reference_table(2).size(), 9u);
  EXPECT_EQ(reference_table(3).size(), 20u);
  EXPECT_EQ(reference_table(4).size(), 14u);
  EXPECT_EQ(reference_table(5).size(), 13u);
  EXPECT_THROW(reference_table(6), Error);
  int starred = 0;
  for (const auto& r : reference_table(1)) starred += r.npa_level_two;
  EXPECT_EQ(starred, 6);
}

// Every figure-derived entry with table rows must reproduce them; misprints are
// reported but tolerated.
TEST(Catalog, FigureDerivedEntriesVerify) {
  for (const std::string name : {"clamp", "hat", "house", "caltrop", "spike", "arrow", "square curly", "pentagon curly"}) {
    const auto e = catalog_lookup(name);
    const auto report = verify_catalog_entry(e);
    EXPECT_TRUE(report.pinned()) << name;
    EXPECT_TRUE(report.ok()) << name;
    for (const auto& c : report.checks) {
      if (!c.match) EXPECT_TRUE(c.misprint) << name << " table " << c.table << " " << c.column;
    }
    EXPECT_EQ(catalog_status(e), "figure-derived, verified");
  }
}

TEST(Catalog, KnownMisprintsAreReported) {
  const auto report = verify_catalog_entry(catalog_lookup("arrow"));
  int misprints = 0;
  for (const auto& c : report.checks) {
    if (c.table == 2) {
      EXPECT_FALSE(c.match);
      EXPECT_TRUE(c.misprint);
      ++misprints;
    }
  }
  EXPECT_EQ(misprints, 2);

  const auto hex = verify_catalog_entry(catalog_lookup("hexagon"));
  bool seen = false;
  for (const auto& c : hex.checks) {
    if (c.table == 4 && c.column == 'C') {
      EXPECT_EQ(c.computed, Rational(89, 18));
      EXPECT_TRUE(c.misprint);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Catalog, WrongGraphFailsVerification) {
  CatalogEntry fake = catalog_lookup("clamp");
  fake.graph = Graph("clamp", 6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}});
  const auto report = verify_catalog_entry(fake, references_for(catalog_lookup("clamp")));
  EXPECT_TRUE(report.pinned());
  EXPECT_FALSE(report.ok());
}

TEST(Catalog, UnpinnedEntriesAreServed) {
  for (const std::string name : {"double triangle", "pyramid double", "spike curly", "arrow curly"}) {
    const auto e = catalog_lookup(name);
    EXPECT_EQ(catalog_status(e), "figure-derived, unpinned") << name;
  }
  EXPECT_EQ(catalog_lookup("double pyramid").graph.edges().size(), 12u);
}

TEST(Catalog, ExplicitEntriesNeedNoVerification) {
  EXPECT_EQ(catalog_status(catalog_lookup("tetrahedron")), "explicit-definition");
  EXPECT_EQ(catalog_lookup("hexagon").provenance, Provenance::explicit_definition);
}

TEST(Catalog, TableTasks) {
  EXPECT_EQ(table_task(3).start, StartRule::distinct);
  EXPECT_TRUE(table_task(3).symmetric_only);
  EXPECT_EQ(table_task(4).kind, TaskKind::domination);
  EXPECT_EQ(table_task(5).start, StartRule::distinct);
}
