for (int i = 0; i < num_pixels; i++) {
    fitness += (abs(objetivo[i].r -
    individuo->imagen[i].r) +
    abs(objetivo[i].g -
    individuo->imagen[i].g)) +
    abs(objetivo[i].b -
    individuo->imagen[i].b);
}
