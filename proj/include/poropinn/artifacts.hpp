#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "poropinn/evaluation.hpp"
#include "poropinn/training.hpp"

namespace poropinn {

// header: iteration,total,<the 11 loss terms in kLossTermNames order>
void write_loss_history_csv(std::ostream& os, const std::vector<LossHistoryEntry>& history);

// header: x,t,u_pred,p_pred,u_exact,p_exact,abs_err_u,abs_err_p
void write_error_field_csv(std::ostream& os, const std::vector<ErrorRecord>& records);

// header: layers,width,rmse_u,rmse_p
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// The flat key=value summary a run leaves behind.  Values are written with
// max_digits10 precision so a re-parse restores the exact doubles.
struct RunMetrics {
    double rmse_u = 0.0, rmse_p = 0.0;
    double max_abs_err_u = 0.0, max_abs_err_p = 0.0;
    double final_loss = 0.0;
    double wall_time_s = 0.0;
    long iterations = 0;
    std::uint64_t seed = 0;
};

void write_metrics(std::ostream& os, const RunMetrics& metrics);

// Generic reader for the key=value format (blank lines ignored).
std::map<std::string, std::string> read_key_values(std::istream& is);

// Renders one field's |error| grid as a binary PPM: x left-to-right, t
// bottom-to-top, a fixed five-stop colormap normalized to the image maximum,
// and a dashed white vertical line marking the interface column.
void write_error_heatmap_ppm(std::ostream& os, const std::vector<ErrorRecord>& records,
                             const EvalGrid& grid, FieldIndex field, double zeta);

}  // namespace poropinn
