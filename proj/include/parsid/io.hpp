#ifndef PARSID_IO_HPP_
#define PARSID_IO_HPP_

#include <string>

#include "parsid/admm_solver.hpp"
#include "parsid/dataset.hpp"

namespace parsid {

/// Identification result as JSON, with the resolved run config embedded.
/// zeta_in entries are included when the ground truth is supplied.
void write_result_json(const IdentificationResult& result,
                       const ChunkedDataset& dataset, const GroundTruth* truth,
                       const std::string& config_echo, const std::string& path);

/// Per-instant reconstruction table (sensor input and output, observed and
/// missing instants flagged). Ground-truth columns appear when available.
void write_reconstruction_csv(const IdentificationResult& result,
                              const ChunkedDataset& dataset,
                              const GroundTruth* truth,
                              const std::string& config_echo,
                              const std::string& path);

void write_ground_truth_json(const GroundTruth& truth, const std::string& config_echo,
                             const std::string& path);

}  // namespace parsid

#endif  // PARSID_IO_HPP_
