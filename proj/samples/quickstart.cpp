// Builds a wavelet tree over a short text with each algorithm and runs a
// few queries.

#include <iostream>
#include <string>
#include <vector>

#include <wt/wt.hpp>

int main()
{
    const std::string text = "once upon a time a PhD student";
    const std::vector<std::uint32_t> raw(text.begin(), text.end());
    const auto [seq, map] = wt::remap_contiguous(raw, wt::encoding::one_byte);

    const auto seq_tree = wt::build_sequential(seq);
    const auto pwt_tree = wt::build_pwt(seq, 4);
    const auto dd_tree = wt::build_dd(seq, 4, 3);
    std::cout << "n=" << seq_tree.size() << " sigma=" << seq_tree.sigma() << " levels=" << seq_tree.level_count()
              << " identical=" << (seq_tree == pwt_tree && pwt_tree == dd_tree) << '\n';

    const auto t = *map.forward('t');
    std::cout << "access(24) = '" << static_cast<char>(map.inverse(dd_tree.access(24))) << "'\n";
    std::cout << "rank('t', 29) = " << dd_tree.rank(t, 29) << '\n';
    std::cout << "select('t', 2) = " << dd_tree.select(t, 2) << '\n';
}
