#pragma omp target teams distribute parallel for
for (i = 0; i < n; i++)
    y[i] = y[i] + alpha * x[i];
