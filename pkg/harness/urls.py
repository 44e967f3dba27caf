from django.urls import path
from . import views

urlpatterns = [
    # Read-only run registry
    path('', views.ExperimentRunListView.as_view(), name='run-list'),
    path('<int:pk>/', views.ExperimentRunDetailView.as_view(), name='run-detail'),
]
