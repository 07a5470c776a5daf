/* The public header must compile as C. */
#include <stdio.h>

#include "dduffing/dduffing.h"

int main(void) {
    dd_orbit* orbit = NULL;
    dd_orbit_info info;
    double dde = 0.0, shift = 0.0;
    if (dd_orbit_solve(0.5, 1, &orbit) != DD_OK) {
        fprintf(stderr, "%s\n", dd_last_error());
        return 1;
    }
    dd_orbit_get_info(orbit, &info);
    dd_orbit_lift_residual(orbit, 1000, &dde, &shift);
    dd_orbit_free(orbit);
    printf("dduffing %s: A_1(T=0.5) = %.10f, residuals %.2e %.2e\n", dd_version(), info.amplitude, dde, shift);
    return (dde < 1e-8 && shift < 1e-8) ? 0 : 1;
}
