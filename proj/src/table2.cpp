#include "graphbior/kernels.hpp"

namespace graphbior {

// Published graphBior rows, coefficients listed highest degree first.
const std::vector<Table2Row>& table2()
{
    static const std::vector<Table2Row> rows = {
        {6, 6,
         {-0.3864, 4.0351, -17.0630, 36.5763, -39.8098, 17.6477, 0, 0, 0, 0, 0, 0},
         {0.4352, -4.9802, 23.2396, -55.4662, 67.2657, -29.0402, -13.0400, 7.5253, 9.5267,
          -4.8746, -2.0616, 1.2633, 1.2071}},
        {7, 7,
         {0.3115, -3.9523, 21.0540, -60.3094, 98.0605, -85.9222, 31.7578, 0, 0, 0, 0, 0, 0, 0},
         {-0.4975, 6.8084, -39.6151, 126.2423, -234.3683, 241.5031, -97.6557, -46.2635,
          62.1232, -19.3648, -2.0766, 6.5886, -4.5632, 0.5775, 1.5614}},
        {8, 8,
         {-0.3232, 4.7284, -29.7443, 104.3985, -221.0705, 282.7915, -202.6283, 62.8477, 0, 0,
          0, 0, 0, 0, 0, 0},
         {0.4470, -6.9872, 47.5460, -183.6940, 440.0924, -670.0905, 643.3979, -396.0713,
          209.9824, -154.0976, 92.8617, -30.8228, 16.6112, -12.7664, 3.2403, -0.0284, 1.3793}},
    };
    return rows;
}

} // namespace graphbior
