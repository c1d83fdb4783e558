#include "doctest.h"
#include "rbopt/rng.hpp"

using rbopt::RngStream;

TEST_CASE("equal seeds give equal engines, different seeds differ") {
  const RngStream a = RngStream::from_seed(42);
  const RngStream b = RngStream::from_seed(42);
  const RngStream c = RngStream::from_seed(43);
  CHECK(a.engine(0)() == b.engine(0)());
  CHECK(a.engine(7)() == b.engine(7)());
  CHECK(a.engine(0)() != c.engine(0)());
}

TEST_CASE("child streams are label- and order-sensitive") {
  const RngStream root = RngStream::from_seed(1);
  CHECK(root.child(1).key() != root.child(2).key());
  CHECK(root.child(1).child(2).key() != root.child(2).child(1).key());
  CHECK(root.child(1, 0).key() != root.child(1, 1).key());
  CHECK(root.child(1, 0).key() == root.child(1, 0).key());
}

TEST_CASE("per-index engines decorrelate consecutive slots") {
  const RngStream s = RngStream::from_seed(5);
  // crude sanity check: first outputs of neighbouring slots are distinct
  auto e0 = s.engine(0);
  auto e1 = s.engine(1);
  CHECK(e0() != e1());
}
