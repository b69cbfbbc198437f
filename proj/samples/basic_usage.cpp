#include <iostream>

#include "dynkd/dynkd.hpp"

int main() {
  dynkd::TreeOptions opts;
  opts.k = 3;
  opts.policy = dynkd::BalancePolicy::avl(1);

  dynkd::KdTree tree(opts);
  for (auto t : {dynkd::KTuple{2, 3, 3}, {5, 4, 2}, {9, 6, 7}, {4, 7, 9}, {8, 1, 5}, {7, 2, 6}, {9, 4, 1}}) {
    tree.insert(t);
  }
  tree.erase({5, 4, 2});

  std::cout << "size " << tree.size() << ", height " << tree.height() << '\n';
  std::cout << "contains (8,1,5): " << std::boolalpha << tree.contains({8, 1, 5}) << '\n';
  for (const auto& t : tree.sorted_tuples()) std::cout << t << '\n';

  dynkd::dump(std::cout, dynkd::verify(tree));
}
