#pragma once

#include <vector>

#include "hyperlev/pricing.hpp"

namespace hyperlev::presets {

/// A European option grid evaluated for several truncation vectors.
struct PriceTable {
  int set = 1;
  double sigma = 0;
  double r = 0.03;
  double S0 = 0;
  double K = 0;
  std::vector<double> maturities;
  std::vector<TruncationVector> rows;
  std::vector<std::vector<double>> reference;  // reference prices, row by row
  std::vector<double> fourier_reference;
};

inline const std::vector<double> kMaturities{0.01, 0.1, 0.2, 0.5, 0.9};

/// ITM call, parameter set 1 with sigma = 0.042.
inline PriceTable table2() {
  PriceTable t;
  t.set = 1;
  t.sigma = 0.042;
  t.S0 = 95;
  t.K = 90;
  t.maturities = kMaturities;
  t.rows = {{2, 2, 2, 2, 2, 4, 4, 8},         {4, 4, 4, 4, 4, 6, 6, 10},         {6, 6, 6, 6, 6, 8, 8, 12},
            {8, 8, 8, 8, 8, 10, 10, 14},      {10, 10, 10, 10, 10, 12, 12, 16},  {15, 15, 15, 15, 15, 30, 30, 60},
            {15, 15, 20, 20, 20, 40, 40, 100}, {15, 15, 25, 25, 35, 50, 50, 110}};
  t.reference = {{5.09974, 5.94683, 6.78061, 7.23382, -24.48527}, {5.09975, 5.94753, 6.79477, 6.67534, -158.31075},
                 {5.09975, 5.94755, 6.79746, 7.95322, -265.66525}, {5.09975, 5.94755, 6.79760, 9.19484, 155.77080},
                 {5.09975, 5.94755, 6.79759, 9.49692, 1457.00312}, {5.09975, 5.94755, 6.79759, 8.95421, -12.68581},
                 {5.09975, 5.94755, 6.79759, 8.95421, 11.32685},   {5.09975, 5.94755, 6.79759, 8.95421, 11.29891}};
  t.fourier_reference = {5.09975, 5.94755, 6.79759, 8.95421, 11.29892};
  return t;
}

/// ATM call, parameter set 2 without a Gaussian part.
inline PriceTable table3() {
  PriceTable t;
  t.set = 2;
  t.sigma = 0;
  t.S0 = 300;
  t.K = 300;
  t.maturities = kMaturities;
  t.rows = {{2, 2, 2, 2, 2, 4, 4, 8},    {4, 4, 4, 4, 4, 6, 6, 10},         {6, 6, 6, 6, 6, 8, 8, 12},
            {8, 8, 8, 8, 8, 10, 10, 14}, {10, 10, 10, 10, 10, 12, 12, 16}, {15, 15, 15, 15, 15, 30, 30, 60},
            {15, 15, 20, 20, 20, 40, 40, 100}};
  t.reference = {{0.61954, 5.25306, 9.07478, -515.10360, -72839.82457},
                 {0.61954, 5.25119, 9.20011, -637.32154, -296414.11217},
                 {0.61954, 5.25121, 9.23466, -544.43333, -844397.61170},
                 {0.61954, 5.25121, 9.23939, -339.58140, -1776370.99729},
                 {0.61954, 5.25121, 9.23987, -157.10396, -2871257.37102},
                 {0.61954, 5.251214, 9.23991, 18.14807, 26.98182},
                 {0.61954, 5.25121, 9.23991, 18.14807, 26.98185}};
  t.fourier_reference = {0.61954, 5.25121, 9.23991, 18.14807, 26.98185};
  return t;
}

/// OTM call, parameter set 2 without a Gaussian part.
inline PriceTable table4() {
  PriceTable t;
  t.set = 2;
  t.sigma = 0;
  t.S0 = 10;
  t.K = 11;
  t.maturities = kMaturities;
  t.rows = {{2, 2, 2, 2, 2, 4, 4, 8},    {4, 4, 4, 4, 4, 6, 6, 10},         {6, 6, 6, 6, 6, 8, 8, 12},
            {8, 8, 8, 8, 8, 10, 10, 14}, {10, 10, 10, 10, 10, 12, 12, 16}, {15, 15, 15, 15, 15, 20, 20, 30},
            {15, 15, 15, 15, 15, 30, 30, 60}};
  t.reference = {{0.00128, 0.01532, 0.03684, 0.14880, 0.44918}, {0.00128, 0.01532, 0.03678, 0.14508, 0.38900},
                 {0.00128, 0.01532, 0.03678, 0.14486, 0.38104}, {0.001282, 0.01532, 0.03678, 0.14489, 0.38465},
                 {0.00128, 0.01532, 0.03678, 0.14488, 0.38463}, {0.00128, 0.01532, 0.03678, 0.14488, 0.38460},
                 {0.00128, 0.01532, 0.03678, 0.14488, 0.38460}};
  t.fourier_reference = {0.00128, 0.01532, 0.03678, 0.14488, 0.38460};
  return t;
}

/// Up-and-out digital on parameter set 1.
struct DigitalTable {
  int set = 1;
  double sigma = 0.042;
  double r = 0.03;
  double t = 0.25;
  double k = 1.1;
  double c = 0.5;
  struct Row {
    long steps;
    double upper;
    double reference;
  };
  std::vector<Row> rows{{100000, 1e3, 0.896525}, {1000000, 1e4, 0.896764}, {10000000, 1e5, 0.896865}};
  /// Rows above this step count only run on request.
  long desk_steps = 1000000;
};

inline DigitalTable table1() { return {}; }

}  // namespace hyperlev::presets
