#pragma once

#include <iosfwd>
#include <string>

#include "pb4/flexibility.hpp"
#include "pb4/highdim.hpp"
#include "pb4/optimizer.hpp"
#include "pb4/profiles.hpp"
#include "pb4/quadrilateral.hpp"
#include "json.hpp"

namespace pb4 {

/// Shortest decimal form that reads back to the same double; "inf" for INF.
std::string format_number(double v);

/// Header line of names, one line of grid metadata, then one grid row per line.
void write_field_csv(std::ostream& os, const ScalarField& f);
ScalarField read_field_csv(std::istream& is);

nlohmann::json to_json(const Profile1D& p);
nlohmann::json to_json(const FlexReport& r);
nlohmann::json to_json(const LowerCertificate& c);
nlohmann::json to_json(const CertificateReport& c);

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_decay_csv(std::ostream& os, const DecayTable& t);
void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& h);

}  // namespace pb4
