// Walks through one model space end to end: the gcd, the lifting symbol,
// the intertwiner it induces, the solution space of S_z^* X = X S_z, and the
// block form of the Hankel lift.

#include <iostream>

#include <hankel_lift/hankel_lift.hpp>

int main()
{
    using namespace hlift;
    const cplx i(0.0, 1.0);

    // zeros i/2 and -i/2 are conjugates of each other
    const auto u     = make_blaschke({0.5 * i, -0.5 * i});
    const auto theta = gcd_symbol_theta(u);
    std::cout << "u     = " << to_text(u) << "\n"
              << "theta = " << to_text(theta) << "\n";

    const auto rep = solve_intertwiner_space(u, 64, kDefaultRankTol, true);
    std::cout << "dim {X : S^*X = XS} = " << rep.solution_dim
              << ", max residual " << rep.residual_max() << "\n";

    const auto x = gcd_intertwiner(u, 64);
    std::cout << "X from phi = T_z^* theta:\n" << x->entries << "\n";

    const auto& lift = *rep.lift_check;
    std::cout << "lift at order " << lift.order << ": off-diagonal "
              << lift.off_diagonal_max() << ", lower-right " << lift.lower_right
              << ", ||H|| - ||X|| = " << lift.norm_H - lift.norm_X << "\n";

    // a single non-real zero has no conjugate partner
    const auto v = make_blaschke({0.5 * i});
    std::cout << "u = " << to_text(v) << ": dim = "
              << solve_intertwiner_space(v, 64).solution_dim << "\n";
}
